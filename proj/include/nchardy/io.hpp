#ifndef NCHARDY_IO_HPP
#define NCHARDY_IO_HPP

#include <string>

#include <json.hpp>

#include "nchardy/fock.hpp"
#include "nchardy/pick.hpp"
#include "nchardy/reps.hpp"

// File formats. Complex numbers are [re, im] pairs; matrices are nested
// row-major arrays of pairs.
//
//   graph:          {"vertices": ["v", ...],
//                    "edges": [{"name": "e", "src": "v", "rng": "w"}, ...]}
//   representation: {"multiplicity": {"v": m, ...}}
//   covariant rep:  representation fields plus
//                   {"blocks": {"e": [[[re,im],...],...], ...}}  (T(e) blocks)
//   point:          {"representation": {...}, "blocks": {...}}   (eta_e blocks)
//   hardy element:  {"a0": {"v": [re,im], ...},
//                    "tensors": [{"degree": k,
//                                 "entries": [[["e1","e2"], re, im], ...]}],
//                    "rule": {"kind": "geometric",            (optional)
//                             "factor": [[["e"], re, im], ...]}}
//                   The rule continues the series past the listed tensors by
//                   theta_k = theta_{k-1} (x) factor.
//   problem:        {"points": [point blocks...], "B": [matrix...],
//                    "C": [matrix...]}
//
// Parse failures throw ParseError naming the file and the offending field.
namespace nchardy::io {

using json = nlohmann::ordered_json;

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& context);

json load_file(const std::string& path);

GraphPtr graph_from_json(const json& j, const std::string& context);
GraphPtr load_graph(const std::string& path);
json graph_to_json(const DirectedGraph& g);

RepPtr representation_from_json(const json& j, GraphPtr g,
                                const std::string& context);
RepPtr load_representation(const std::string& path, GraphPtr g);
json representation_to_json(const Representation& rep);

// A covariant-representation file: multiplicities plus T(e) blocks.
CovariantRep covariant_from_json(const json& j, GraphPtr g,
                                 const std::string& context);
CovariantRep load_covariant(const std::string& path, GraphPtr g);
json covariant_to_json(const CovariantRep& t);

DualPoint point_from_json(const json& j, GraphPtr g, const std::string& context);
DualPoint load_point(const std::string& path, GraphPtr g);
json point_to_json(const DualPoint& p);

HardyElement hardy_from_json(const json& j, GraphPtr g, const std::string& context);
HardyElement load_hardy(const std::string& path, GraphPtr g);
json hardy_to_json(const HardyElement& h, int max_degree);

// Problem files carry the points' shared representation once.
InterpolationProblem problem_from_json(const json& j, GraphPtr g,
                                       const std::string& context);
InterpolationProblem load_problem(const std::string& path, GraphPtr g);

}  // namespace nchardy::io

#endif
