#pragma once

#include <string>

#include "cacp/interp.hpp"

namespace cacp {

/// Writes A in Matrix Market coordinate format.
void save_matrix_market(const SpMat& A, const std::string& path);

/// Writes the band enumeration as CSV: one line per row with the node
/// multi-index, label (1 = interpolation, 2 = edge) and row id.
void write_band_csv(const BandMap& band, const std::string& path);

/// Writes a vector as CSV with a single named column.
void write_vector_csv(const Eigen::VectorXd& v, const std::string& path,
                      const std::string& column = "value");

void write_text_file(const std::string& path, const std::string& content);

}  // namespace cacp
