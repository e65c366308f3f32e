// Timing comparison of the serial reference kernels against the OpenMP
// versions on the assembly-heavy operations: creation operators on a large
// Fock truncation, superoperator matrices from their action, and the Choi
// matrix of a multi-point kernel.

#include <chrono>
#include <cstdio>
#include <functional>

#include "nchardy/fock.hpp"
#include "nchardy/kernels.hpp"
#include "nchardy/pick.hpp"
#include "nchardy/random.hpp"
#include "nchardy/reps.hpp"

using namespace nchardy;

namespace {

double time_ms(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, const std::function<void()>& fn) {
  kernels::set_parallel_enabled(false);
  double serial = time_ms(fn);
  kernels::set_parallel_enabled(true);
  double parallel = time_ms(fn);
  std::printf("%-34s serial %8.1f ms   omp %8.1f ms   speedup %.2fx\n", name,
              serial, parallel, serial / parallel);
}

}  // namespace

int main() {
  Rng rng(1);

  {
    auto g = DirectedGraph::free_loops(2);
    auto fb = std::make_shared<FockBasis>(g, 9);  // 1023 paths
    CorrTensor xi = random_tensor(g, 2, rng);
    std::printf("Fock basis size %d\n", fb->size());
    report("creation operator assembly", [&] {
      volatile double sink = creation_operator(xi, fb).mat.cwiseAbs().sum();
      (void)sink;
    });
  }

  {
    auto g = DirectedGraph::cycle(2);
    auto rep = std::make_shared<Representation>(g, std::vector<int>{24, 24});
    CovariantRep t = make_covariant(
        rep, {0.4 * random_matrix(24, 24, rng), 0.4 * random_matrix(24, 24, rng)});
    Superoperator phi = cp_map(t);
    report("superoperator from action", [&] {
      Superoperator rebuilt = Superoperator::from_action(
          rep, [&](const CommutantElement& b) { return phi.apply(b); });
      volatile double sink = rebuilt.matrix().cwiseAbs().sum();
      (void)sink;
    });
  }

  {
    auto g = DirectedGraph::free_loops(1);
    auto rep = std::make_shared<Representation>(g, std::vector<int>{16});
    std::vector<DualPoint> points;
    std::vector<Matrix> left, right;
    for (int i = 0; i < 6; ++i) {
      Matrix a = random_matrix(16, 16, rng);
      points.emplace_back(rep, std::vector<Matrix>{0.6 * a / op_norm(a)});
      left.push_back(Matrix::Identity(16, 16));
      right.push_back(0.2 * random_matrix(16, 16, rng));
    }
    InterpolationProblem prob{points, left, right};
    report("Pick kernel panel assembly", [&] {
      KernelBlockMap k = pick_matrix(prob);
      volatile double sink = k.block(0, 0).cwiseAbs().sum();
      (void)sink;
    });
  }
  return 0;
}
