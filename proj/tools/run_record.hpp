#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace cascyl::cli {

/// One output row. Closed forms report err_est = 0 and zero matrix sizes.
struct RunRecord {
  std::string kind, bc;
  double a = 0, b = 0, d = 0;
  std::string method, quantity;
  double value_per_length = 0, err_est = 0;
  int n_matrix = 0, p_terms_max = 0, xi_nodes = 0;
  bool converged = true;
  double wall_seconds = 0;
};

inline constexpr const char* kCsvVersion = "# casimir_cyl run-record v1";
inline constexpr const char* kCsvColumns =
    "kind,bc,a,b,d,method,quantity,value_per_length,err_est,n_matrix,p_terms_max,xi_nodes,converged,wall_seconds";

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<RunRecord>& rows) {
  os << kCsvVersion << '\n' << kCsvColumns << '\n';
  for (const auto& r : rows)
    os << r.kind << ',' << r.bc << ',' << fmt(r.a) << ',' << fmt(r.b) << ',' << fmt(r.d) << ',' << r.method << ','
       << r.quantity << ',' << fmt(r.value_per_length) << ',' << fmt(r.err_est) << ',' << r.n_matrix << ','
       << r.p_terms_max << ',' << r.xi_nodes << ',' << (r.converged ? "true" : "false") << ','
       << fmt(r.wall_seconds) << '\n';
}

inline nlohmann::ordered_json to_json(const RunRecord& r) {
  return {{"kind", r.kind},
          {"bc", r.bc},
          {"a", r.a},
          {"b", r.b},
          {"d", r.d},
          {"method", r.method},
          {"quantity", r.quantity},
          {"value_per_length", r.value_per_length},
          {"err_est", r.err_est},
          {"n_matrix", r.n_matrix},
          {"p_terms_max", r.p_terms_max},
          {"xi_nodes", r.xi_nodes},
          {"converged", r.converged},
          {"wall_seconds", r.wall_seconds}};
}

inline RunRecord from_json(const nlohmann::json& j) {
  RunRecord r;
  j.at("kind").get_to(r.kind);
  j.at("bc").get_to(r.bc);
  j.at("a").get_to(r.a);
  j.at("b").get_to(r.b);
  j.at("d").get_to(r.d);
  j.at("method").get_to(r.method);
  j.at("quantity").get_to(r.quantity);
  j.at("value_per_length").get_to(r.value_per_length);
  j.at("err_est").get_to(r.err_est);
  j.at("n_matrix").get_to(r.n_matrix);
  j.at("p_terms_max").get_to(r.p_terms_max);
  j.at("xi_nodes").get_to(r.xi_nodes);
  j.at("converged").get_to(r.converged);
  j.at("wall_seconds").get_to(r.wall_seconds);
  return r;
}

inline void write_json(std::ostream& os, const std::vector<RunRecord>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  os << arr.dump(2) << '\n';
}

}  // namespace cascyl::cli
