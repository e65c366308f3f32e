// Command-line front end: evaluate Hardy elements at dual points, test
// Nevanlinna-Pick feasibility, classify covariant representations, print
// sigma-dual structure, build isometric dilations, and run the property
// suites, all from JSON bundle files.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "nchardy/accont.hpp"
#include "nchardy/eval.hpp"
#include "nchardy/io.hpp"
#include "nchardy/pick.hpp"
#include "nchardy/suite.hpp"

using namespace nchardy;

namespace {

struct Options {
  std::string graph_file;
  std::string rep_file;
  std::string element_file;
  std::string points_file;
  std::string problem_file;
  std::string w_out_file;
  int level = defaults::kLevelCap;
  unsigned long seed = defaults::kSeed;
  bool expect_feasible = false;
  bool json = false;
};

void print_matrix(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      cx v = m(i, j);
      std::printf("  %+.12g%+.12gi", v.real(), v.imag());
    }
    std::printf("\n");
  }
}

void emit_json(const Options& opt, const io::json& block) {
  if (opt.json) std::cout << block.dump(2) << "\n";
}

int run_eval(const Options& opt) {
  GraphPtr g = io::load_graph(opt.graph_file);
  HardyElement element = io::load_hardy(opt.element_file, g);
  DualPoint point = io::load_point(opt.points_file, g);
  try {
    EvalResult r = evaluate(element, point, 1e-12, defaults::kIterationCap);
    std::printf("value (%ld x %ld):\n", static_cast<long>(r.value.rows()),
                static_cast<long>(r.value.cols()));
    print_matrix(r.value);
    std::printf("terms used: %d\ntail bound: %.3e\n", r.terms_used, r.tail_bound);
    emit_json(opt, {{"command", "eval"},
                    {"value", io::matrix_to_json(r.value)},
                    {"terms_used", r.terms_used},
                    {"tail_bound", r.tail_bound}});
    return 0;
  } catch (const RadiusExceeded& ex) {
    std::printf("radius exceeded after %d terms; partial sum:\n",
                ex.partial.terms_used);
    print_matrix(ex.partial.value);
    emit_json(opt, {{"command", "eval"},
                    {"error", "radius exceeded"},
                    {"partial", io::matrix_to_json(ex.partial.value)},
                    {"terms_used", ex.partial.terms_used}});
    return 2;
  }
}

int run_interp(const Options& opt) {
  GraphPtr g = io::load_graph(opt.graph_file);
  InterpolationProblem problem = io::load_problem(opt.problem_file, g);
  NpResult r = np_feasible(problem);
  std::printf("verdict: %s\n", r.feasible ? "feasible" : "infeasible");
  std::printf("min Choi eigenvalue: %.12e\n", r.choi.min_eig);
  if (r.choi.marginal) std::printf("note: spectrum is marginal\n");
  if (!r.faithful)
    std::printf("note: sigma is not faithful (zero multiplicity); the \n"
                "      interpolation theorem assumes faithfulness\n");
  io::json jb{{"command", "interp"},
              {"feasible", r.feasible},
              {"min_choi_eigenvalue", r.choi.min_eig},
              {"marginal", r.choi.marginal},
              {"faithful", r.faithful}};
  io::json spectrum = io::json::array();
  for (Eigen::Index i = 0; i < r.choi.spectrum.size(); ++i)
    spectrum.push_back(r.choi.spectrum(i));
  jb["choi_spectrum"] = std::move(spectrum);
  if (!r.feasible) {
    std::printf("witness vector:\n");
    Matrix w = r.choi.witness;
    print_matrix(w.transpose());
    jb["witness"] = io::matrix_to_json(w);
  }
  emit_json(opt, jb);
  return (!r.feasible && opt.expect_feasible) ? 3 : 0;
}

int run_classify(const Options& opt) {
  GraphPtr g = io::load_graph(opt.graph_file);
  CovariantRep t = io::load_covariant(opt.rep_file, g);
  auto fb = std::make_shared<FockBasis>(g, opt.level);
  Classification c = classify(t);
  std::printf("||T~|| = %.12g\n", t.norm());
  std::printf("contractive:       %s\n", c.contractive ? "yes" : "no");
  std::printf("isometric:         %s\n", c.isometric ? "yes" : "no");
  std::printf("fully coisometric: %s\n", c.fully_coisometric ? "yes" : "no");
  std::printf("pure:              %s", c.pure ? "yes" : "no");
  if (!c.purity_trace.empty())
    std::printf("  (decay after %zu steps: %.3e)", c.purity_trace.size(),
                c.purity_trace.back());
  std::printf("\n");

  io::json jb{{"command", "classify"},
              {"norm", t.norm()},
              {"contractive", c.contractive},
              {"isometric", c.isometric},
              {"fully_coisometric", c.fully_coisometric},
              {"pure", c.pure}};
  if (c.contractive) {
    ACReport ac = ac_membership(t, fb);
    const char* verdict = ac.verdict == AcVerdict::absolutely_continuous
                              ? "absolutely continuous"
                          : ac.verdict == AcVerdict::not_ac ? "not AC"
                                                            : "undecided";
    std::printf("absolute continuity: %s\n", verdict);
    jb["absolutely_continuous"] = verdict;
    if (ac.periodic_state)
      std::printf("periodic state: k=%d\n", ac.periodic_state->period);
    if (ac.verdict == AcVerdict::not_ac) {
      std::printf("obstruction subspace dimension: %ld\n",
                  static_cast<long>(ac.w.cols()));
      jb["obstruction_dim"] = static_cast<int>(ac.w.cols());
      if (ac.periodic_state) jb["periodic_state_k"] = ac.periodic_state->period;
    }
    if (!opt.w_out_file.empty()) {
      std::ofstream out(opt.w_out_file);
      out << io::matrix_to_json(ac.w).dump(2) << "\n";
      std::printf("obstruction basis written to %s\n", opt.w_out_file.c_str());
    }
  } else {
    std::printf("absolute continuity: skipped (not contractive)\n");
  }
  emit_json(opt, jb);
  return 0;
}

int run_suite(const Options& opt) {
  GraphPtr g = io::load_graph(opt.graph_file);
  std::vector<SuiteResult> results;
  results.push_back(suite_corr_axioms(g, 200, opt.seed));
  results.push_back(suite_cuntz_toeplitz(g, opt.level));
  results.push_back(suite_norm_identity(g, 50, opt.seed + 1, std::max(4, opt.level)));
  results.push_back(suite_gauge(g, opt.level, opt.seed + 2));
  bool all_ok = true;
  io::json jb{{"command", "suite"}, {"suites", io::json::array()}};
  for (const SuiteResult& r : results) {
    std::printf("%-28s passed %4d  failed %d\n", r.name.c_str(), r.passed,
                r.failed);
    for (const std::string& f : r.failures) std::printf("    FAIL: %s\n", f.c_str());
    all_ok = all_ok && r.ok();
    jb["suites"].push_back(
        {{"name", r.name}, {"passed", r.passed}, {"failed", r.failed}});
  }
  emit_json(opt, jb);
  return all_ok ? 0 : 3;
}

int run_dual(const Options& opt) {
  GraphPtr g = io::load_graph(opt.graph_file);
  RepPtr rep = io::load_representation(opt.rep_file, g);
  DualCorrespondence dual = dual_correspondence(rep);
  std::printf("sigma-dual of E(G) over the commutant (+)_v M_{m_v}:\n");
  for (int e = 0; e < g->n_edges(); ++e) {
    auto [r, c] = dual.block_shape(e);
    std::printf("  block %-8s : %d x %d   (edge %s of the opposite graph: %s -> %s)\n",
                g->edge(e).name.c_str(), r, c,
                dual.opposite->edge(e).name.c_str(),
                dual.opposite->vertex_name(dual.opposite->src(e)).c_str(),
                dual.opposite->vertex_name(dual.opposite->rng(e)).c_str());
  }
  bool scalar = true;
  for (int v = 0; v < g->n_vertices(); ++v) scalar = scalar && rep->mult(v) == 1;
  if (scalar)
    std::printf("all multiplicities are 1: E^sigma = E(G^-1), the opposite graph\n");
  emit_json(opt, {{"command", "dual"},
                  {"opposite_graph", io::graph_to_json(*dual.opposite)},
                  {"scalar", scalar}});
  return 0;
}

int run_dilate(const Options& opt) {
  GraphPtr g = io::load_graph(opt.graph_file);
  CovariantRep t = io::load_covariant(opt.rep_file, g);
  auto fb = std::make_shared<FockBasis>(g, opt.level);
  Dilation d = isometric_dilation(t, fb);
  std::printf("dilation space: dim K = %d (H: %d, Fock tail levels <= %d)\n",
              d.big.rep()->dim(), t.rep()->dim(), opt.level);
  std::printf("defect multiplicities:");
  for (int v = 0; v < g->n_vertices(); ++v)
    std::printf(" %s:%d", g->vertex_name(v).c_str(), d.defect_mult[v]);
  std::printf("\n");
  Matrix p = d.h_projection();
  double worst = 0.0;
  for (int e = 0; e < g->n_edges(); ++e) {
    Matrix ve = d.big.full_block(e);
    Matrix te = d.embedding * t.full_block(e) * d.embedding.adjoint();
    worst = std::max(worst, op_norm(p * ve * p - te * p));
  }
  std::printf("compression residual max_e ||P V(e) P - T(e) P|| = %.3e\n", worst);
  emit_json(opt, {{"command", "dilate"},
                  {"dim_K", d.big.rep()->dim()},
                  {"compression_residual", worst}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy-algebra toolkit over directed-graph correspondences"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool needs_graph = true) {
    if (needs_graph)
      sub->add_option("--graph", opt.graph_file, "graph JSON file")->required();
    sub->add_option("--level", opt.level, "Fock truncation level cap");
    sub->add_option("--seed", opt.seed, "seed for randomized checks");
    sub->add_flag("--json", opt.json, "append a machine-readable JSON block");
  };

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate an element at a point");
  add_common(eval_cmd);
  eval_cmd->add_option("--element", opt.element_file, "Hardy element JSON file")
      ->required();
  eval_cmd->add_option("--points", opt.points_file, "dual point JSON file")
      ->required();

  CLI::App* interp_cmd =
      app.add_subcommand("interp", "Nevanlinna-Pick feasibility");
  add_common(interp_cmd);
  interp_cmd->add_option("--problem", opt.problem_file, "interpolation problem file")
      ->required();
  interp_cmd->add_flag("--expect-feasible", opt.expect_feasible,
                       "exit 3 when the verdict is infeasible");

  CLI::App* classify_cmd =
      app.add_subcommand("classify", "classification and absolute continuity");
  add_common(classify_cmd);
  classify_cmd
      ->add_option("--rep", opt.rep_file, "covariant representation JSON file")
      ->required();
  classify_cmd->add_option("--w-out", opt.w_out_file,
                           "write the obstruction subspace basis to this file");

  CLI::App* suite_cmd = app.add_subcommand("suite", "run the property suites");
  add_common(suite_cmd);

  CLI::App* dual_cmd = app.add_subcommand("dual", "print sigma-dual structure");
  add_common(dual_cmd);
  dual_cmd->add_option("--rep", opt.rep_file, "representation JSON file")
      ->required();

  CLI::App* dilate_cmd =
      app.add_subcommand("dilate", "build the isometric dilation");
  add_common(dilate_cmd);
  dilate_cmd
      ->add_option("--rep", opt.rep_file, "covariant representation JSON file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval_cmd->parsed()) return run_eval(opt);
    if (interp_cmd->parsed()) return run_interp(opt);
    if (classify_cmd->parsed()) return run_classify(opt);
    if (suite_cmd->parsed()) return run_suite(opt);
    if (dual_cmd->parsed()) return run_dual(opt);
    if (dilate_cmd->parsed()) return run_dilate(opt);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 1;
  } catch (const BoundaryPointError& e) {
    std::fprintf(stderr, "precondition: %s\n", e.what());
    return 2;
  } catch (const ContractViolation& e) {
    std::fprintf(stderr, "precondition: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
