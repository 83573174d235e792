#include "cacp/io.hpp"

#include <unsupported/Eigen/SparseExtra>

#include <fstream>
#include <iomanip>

namespace cacp {

void save_matrix_market(const SpMat& A, const std::string& path) {
  if (!Eigen::saveMarket(A, path)) throw Error("could not write matrix market file " + path);
}

void write_band_csv(const BandMap& band, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("could not open " + path + " for writing");
  out << (band.grid.dim == 3 ? "i,j,k,label,row\n" : "i,j,label,row\n");
  for (std::int64_t r = 0; r < band.size(); ++r) {
    const auto idx = band.grid.unflat(band.row_to_node[static_cast<std::size_t>(r)]);
    out << idx[0] << ',' << idx[1];
    if (band.grid.dim == 3) out << ',' << idx[2];
    out << ',' << static_cast<int>(band.row_label[static_cast<std::size_t>(r)]) << ',' << r
        << '\n';
  }
  if (!out) throw Error("write failed on " + path);
}

void write_vector_csv(const Eigen::VectorXd& v, const std::string& path,
                      const std::string& column) {
  std::ofstream out(path);
  if (!out) throw Error("could not open " + path + " for writing");
  out << column << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) out << v[i] << '\n';
  if (!out) throw Error("write failed on " + path);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("could not open " + path + " for writing");
  out << content;
  if (!out) throw Error("write failed on " + path);
}

}  // namespace cacp
