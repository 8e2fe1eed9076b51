#include "ewr/report.hpp"

#include <cmath>
#include <sstream>

#include "ewr/matrix_io.hpp"

namespace ewr {

using nlohmann::json;

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json nums(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

}  // namespace

json to_json(const BoundInputs& in) {
  return {{"N", in.n},
          {"K", in.k},
          {"m", in.m},
          {"L", in.depth()},
          {"delta", num(in.delta)},
          {"norm_A", num(in.norm_a)},
          {"G_inf", num(in.g_inf)},
          {"taus", nums(in.taus)},
          {"C_in", num(in.c_in)},
          {"C_out", num(in.c_out)},
          {"alpha", num(in.alpha)},
          {"nonlinearity", in.nonlinearity == NonlinearityKind::linear ? "linear" : "pseudo_huber"}};
}

json to_json(const BoundReport& r) {
  json cov = json::array();
  for (const auto& c : r.covering) cov.push_back({{"eps", num(c.eps)}, {"log_N", num(c.log_n)}});
  return {{"inputs", to_json(r.inputs)},
          {"assumption1_ok", r.assumption1_ok},
          {"max_step", num(max_step(r.inputs.norm_a, r.inputs.k, r.inputs.n))},
          {"gamma", num(r.gamma)},
          {"t_cumsum", nums(r.t_cumsum)},
          {"b", nums(r.b)},
          {"K_L", num(r.k_l)},
          {"log_K_L", num(r.log_k_l)},
          {"K_L_overflow", r.k_l_overflow},
          {"M_L", num(r.m_l)},
          {"M_L_prime", num(r.m_l_prime)},
          {"log_M_L_prime", num(r.log_m_l_prime)},
          {"covering_log", cov},
          {"rademacher", num(r.rademacher)},
          {"gen_bound", num(r.gen_bound)}};
}

json to_json(const PropertyResult& r) {
  return {{"name", r.name},
          {"passed", r.passed},
          {"trials", r.trials},
          {"failures", r.failures},
          {"worst", num(r.worst)},
          {"tolerance", num(r.tolerance)},
          {"detail", r.detail}};
}

json to_json(const PropertyReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back(to_json(e));
  return {{"seed", r.options.seed},
          {"trials", r.options.trials},
          {"tau_factor", num(r.options.tau_factor)},
          {"all_passed", r.all_passed()},
          {"entries", entries}};
}

json to_json(const Figure1Result& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"L", row.depth},
                    {"grid_max", num(row.grid_max)},
                    {"lower_bound", num(row.lower_bound)},
                    {"params1", nums(row.params1)},
                    {"params2", nums(row.params2)},
                    {"A_denominator", num(row.a_denominator)},
                    {"A_ratio", num(row.a_ratio)},
                    {"K_L", num(row.k_l)}});
  json g = json::array();
  for (Index i = 0; i < r.g.size(); ++i) g.push_back(num(r.g(i)));
  return {{"g", g},
          {"tau", num(r.tau)},
          {"gamma", num(r.gamma)},
          {"fit", {{"slope", num(r.fit.slope)}, {"intercept", num(r.fit.intercept)}, {"r_squared", num(r.fit.r_squared)}}},
          {"rows", rows}};
}

std::string figure1_csv(const Figure1Result& r) {
  std::ostringstream os;
  os << "L,lower_bound,theta1,theta2,K_L\n";
  for (const auto& row : r.rows)
    os << row.depth << ',' << format_double(row.lower_bound) << ',' << format_double(row.params1.at(0)) << ','
       << format_double(row.params2.at(0)) << ',' << format_double(row.k_l) << '\n';
  return os.str();
}

}  // namespace ewr
