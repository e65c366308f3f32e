#include "nchardy/kernels.hpp"

#include <atomic>
#include <numeric>

namespace nchardy::kernels {

namespace {
std::atomic<bool> g_parallel{true};
}

void set_parallel_enabled(bool on) { g_parallel.store(on); }
bool parallel_enabled() { return g_parallel.load(); }

Matrix assemble_columns_serial(Eigen::Index rows, Eigen::Index cols,
                               const ColumnFill& fill) {
  Matrix out = Matrix::Zero(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) fill(j, out.col(j));
  return out;
}

Matrix assemble_columns(Eigen::Index rows, Eigen::Index cols,
                        const ColumnFill& fill) {
  if (!parallel_enabled()) return assemble_columns_serial(rows, cols, fill);
  Matrix out = Matrix::Zero(rows, cols);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j) fill(j, out.col(j));
  return out;
}

namespace {
std::vector<Eigen::Index> offsets_of(const std::vector<Eigen::Index>& sizes) {
  std::vector<Eigen::Index> off(sizes.size() + 1, 0);
  std::partial_sum(sizes.begin(), sizes.end(), off.begin() + 1);
  return off;
}
}  // namespace

Matrix assemble_blocks_serial(const std::vector<Eigen::Index>& row_sizes,
                              const std::vector<Eigen::Index>& col_sizes,
                              const BlockFill& fill) {
  auto roff = offsets_of(row_sizes);
  auto coff = offsets_of(col_sizes);
  Matrix out = Matrix::Zero(roff.back(), coff.back());
  for (std::size_t i = 0; i < row_sizes.size(); ++i)
    for (std::size_t j = 0; j < col_sizes.size(); ++j)
      out.block(roff[i], coff[j], row_sizes[i], col_sizes[j]) =
          fill(static_cast<int>(i), static_cast<int>(j));
  return out;
}

Matrix assemble_blocks(const std::vector<Eigen::Index>& row_sizes,
                       const std::vector<Eigen::Index>& col_sizes,
                       const BlockFill& fill) {
  if (!parallel_enabled())
    return assemble_blocks_serial(row_sizes, col_sizes, fill);
  auto roff = offsets_of(row_sizes);
  auto coff = offsets_of(col_sizes);
  Matrix out = Matrix::Zero(roff.back(), coff.back());
  const int nr = static_cast<int>(row_sizes.size());
  const int nc = static_cast<int>(col_sizes.size());
#pragma omp parallel for collapse(2) schedule(dynamic)
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j)
      out.block(roff[i], coff[j], row_sizes[i], col_sizes[j]) = fill(i, j);
  return out;
}

}  // namespace nchardy::kernels
