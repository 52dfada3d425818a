#ifndef CAVMODE_TOOLS_PNG_WRITER_HPP
#define CAVMODE_TOOLS_PNG_WRITER_HPP

#include <Eigen/Dense>
#include <filesystem>

namespace cavmode::cli {

// Renders |values|, normalized to its own maximum, as a false-color PNG.
// Rows map to the vertical axis (first row at the bottom). Dependency-free:
// the IDAT stream uses stored (uncompressed) deflate blocks.
void write_heatmap_png(const std::filesystem::path& path,
                       const Eigen::MatrixXd& magnitudes, int scale = 4);

} // namespace cavmode::cli

#endif // CAVMODE_TOOLS_PNG_WRITER_HPP
