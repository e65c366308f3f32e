#ifndef NCHARDY_KERNELS_HPP
#define NCHARDY_KERNELS_HPP

#include <functional>
#include <vector>

#include "nchardy/types.hpp"

// Assembly kernels behind the matrix-building operations. Each kernel has an
// OpenMP version and a serial reference; outputs are bitwise identical because
// every column/block is computed independently and written to disjoint
// storage. The serial versions stay as the comparison baseline for tests and
// the benchmark tool.
namespace nchardy::kernels {

// When false, the parallel entry points run their serial bodies.
void set_parallel_enabled(bool on);
bool parallel_enabled();

using ColumnFill = std::function<void(Eigen::Index col, Eigen::Ref<Vector>)>;

// Builds the rows x cols matrix whose column j is produced by fill(j, out).
// The output column is zero-initialized before fill runs.
Matrix assemble_columns_serial(Eigen::Index rows, Eigen::Index cols,
                               const ColumnFill& fill);
Matrix assemble_columns(Eigen::Index rows, Eigen::Index cols,
                        const ColumnFill& fill);

using BlockFill = std::function<Matrix(int i, int j)>;

// Builds a block matrix from a grid of independently computed blocks;
// block (i, j) must have shape row_sizes[i] x col_sizes[j].
Matrix assemble_blocks_serial(const std::vector<Eigen::Index>& row_sizes,
                              const std::vector<Eigen::Index>& col_sizes,
                              const BlockFill& fill);
Matrix assemble_blocks(const std::vector<Eigen::Index>& row_sizes,
                       const std::vector<Eigen::Index>& col_sizes,
                       const BlockFill& fill);

}  // namespace nchardy::kernels

#endif
