#ifndef NCHARDY_SUITE_HPP
#define NCHARDY_SUITE_HPP

#include <string>
#include <vector>

#include "nchardy/graph.hpp"
#include "nchardy/random.hpp"

// Seeded property suites over a bundle's graph, shared by the CLI `suite`
// subcommand and the acceptance runner.
namespace nchardy {

struct SuiteResult {
  std::string name;
  int passed = 0;
  int failed = 0;
  std::vector<std::string> failures;

  void check(bool ok, const std::string& what) {
    if (ok) {
      ++passed;
    } else {
      ++failed;
      failures.push_back(what);
    }
  }
  bool ok() const { return failed == 0; }
};

// Inner-product axioms, Cauchy-Schwarz, tensor associativity on random data.
SuiteResult suite_corr_axioms(GraphPtr g, int trials, unsigned long seed,
                              double eps = tol::kEq);

// Cuntz-Toeplitz relations of the truncated creation operators.
SuiteResult suite_cuntz_toeplitz(GraphPtr g, int level_cap, double eps = 1e-12);

// ||T_xi|| = corr_norm(xi) for random tensors.
SuiteResult suite_norm_identity(GraphPtr g, int trials, unsigned long seed,
                                int level_cap, double eps = tol::kResidual);

// Fourier idempotence/orthogonality, exact homogeneous reconstruction, and
// the Cesaro error identity for polynomials.
SuiteResult suite_gauge(GraphPtr g, int level_cap, unsigned long seed);

}  // namespace nchardy

#endif
