#include "ewr/figure1.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "ewr/rng.hpp"
#include "ewr/unroll.hpp"

namespace ewr {

namespace {

constexpr double kMinDenominator = 1e-8;

struct Evaluator {
  const MeasurementEnsemble& e;
  RMatrix g;
  UnrollConfig cfg;
  bool general;

  CMatrix dictionary(const std::vector<double>& p) const {
    return general ? u2_element(p) : rotation(p[0]).matrix();
  }
  CMatrix codes(const std::vector<double>& p) const { return unroll(e, dictionary(p), g, cfg); }

  // Ratio against a precomputed partner.
  double ratio(const std::vector<double>& p, const CMatrix& phi2, const CMatrix& f2) const {
    const CMatrix phi1 = dictionary(p);
    const double den = spectral_norm(phi1 - phi2);
    if (den < kMinDenominator) return 0.0;
    return (unroll(e, phi1, g, cfg) - f2).norm() / den;
  }
};

struct Best {
  double value;
  double x;
};

// Maximize f on [a, b]; returns the best point seen, starting from `start`.
Best golden_max(const std::function<double(double)>& f, double a, double b, int iters, Best start) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  Best best = start;
  auto consider = [&](double v, double x) {
    if (v > best.value) best = {v, x};
  };
  consider(fc, c);
  consider(fd, d);
  for (int i = 0; i < iters; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
      consider(fc, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
      consider(fd, d);
    }
  }
  return best;
}

}  // namespace

RVector figure1_measurement(std::uint64_t seed) {
  Rng rng(seed);
  RVector g(2);
  for (Index i = 0; i < 2; ++i) g(i) = rng.uniform();
  return g / g.maxCoeff();
}

CMatrix u2_element(const std::vector<double>& p) {
  if (p.size() != 4) throw ValidationError("u2_element: expected 4 angles");
  const double ct = std::cos(p[0]), st = std::sin(p[0]);
  const cplx ph = std::polar(1.0, p[1]);
  CMatrix u(2, 2);
  u << std::polar(ct, p[2]), -std::polar(st, -p[3]), std::polar(st, p[3]), std::polar(ct, -p[2]);
  return ph * u;
}

Figure1Result figure1(const MeasurementEnsemble& e, const RVector& g, const Figure1Options& opts) {
  if (!opts.general_u2 && (e.signal_size() != 2 || e.num_focal() != 1))
    throw ValidationError("figure1: rotation mode needs N = 2 and K = 1");
  if (g.size() != e.rows()) throw ValidationError("figure1: measurement length must be KN");
  if (opts.l_max < 1) throw ValidationError("figure1: l_max must be >= 1");
  if (opts.grid < 2) throw ValidationError("figure1: grid must be >= 2");
  if (opts.refine < 0 || opts.inner < 1) throw ValidationError("figure1: bad refinement settings");
  if (!(opts.tau_scale > 0.0)) throw ValidationError("figure1: tau_scale must be positive");

  Figure1Result res;
  res.options = opts;
  res.g = g;
  res.tau = opts.tau_scale * max_step(e);

  const RMatrix gm = g;
  const std::size_t dim = opts.general_u2 ? 4 : 1;
  const double h = 2.0 * std::numbers::pi / opts.grid;

  // Candidate points, the same for every depth.
  std::vector<std::vector<double>> points;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (!opts.general_u2) {
    for (int i = 0; i < opts.grid; ++i) points.push_back({i * h});
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = 0; j < points.size(); ++j) pairs.emplace_back(i, j);
  } else {
    Rng rng(opts.search_seed);
    const std::size_t count = static_cast<std::size_t>(opts.grid) * static_cast<std::size_t>(opts.grid);
    for (std::size_t i = 0; i < 2 * count; ++i) {
      std::vector<double> p(4);
      for (auto& x : p) x = rng.uniform(0.0, 2.0 * std::numbers::pi);
      points.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < count; ++i) pairs.emplace_back(2 * i, 2 * i + 1);
  }
  std::vector<CMatrix> dicts;
  for (const auto& p : points) dicts.push_back(opts.general_u2 ? u2_element(p) : rotation(p[0]).matrix());

  std::vector<double> lbs;
  for (Index depth = 1; depth <= opts.l_max; ++depth) {
    UnrollConfig cfg;
    cfg.taus.assign(static_cast<std::size_t>(depth), res.tau);
    cfg.reg = opts.reg;
    cfg.nl = Nonlinearity::pseudo_huber(opts.delta);
    cfg.init = InitMode::fixed_unit_vector;
    const Evaluator ev{e, gm, cfg, opts.general_u2};

    std::vector<CMatrix> codes;
    for (const auto& d : dicts) codes.push_back(unroll(e, d, gm, cfg));

    // Ties keep the first pair in scan order.
    double best = 0.0;
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (auto [i, j] : pairs) {
      const double den = spectral_norm(dicts[i] - dicts[j]);
      if (den < kMinDenominator) continue;
      const double r = (codes[i] - codes[j]).norm() / den;
      if (!found || r > best) {
        best = r;
        bi = i;
        bj = j;
        found = true;
      }
    }

    Figure1Row row;
    row.depth = depth;
    row.grid_max = best;
    std::vector<double> p1 = points[bi], p2 = points[bj];
    double r = best;
    const double bracket = opts.general_u2 ? 0.25 : h;
    for (int round = 0; round < opts.refine; ++round) {
      for (int side = 0; side < 2; ++side) {
        std::vector<double>& mv = side == 0 ? p1 : p2;
        const std::vector<double>& fixed = side == 0 ? p2 : p1;
        const CMatrix phi_f = ev.dictionary(fixed);
        const CMatrix f_f = ev.codes(fixed);
        for (std::size_t c = 0; c < dim; ++c) {
          auto f = [&](double x) {
            std::vector<double> q = mv;
            q[c] = x;
            return ev.ratio(q, phi_f, f_f);
          };
          const Best b = golden_max(f, mv[c] - bracket, mv[c] + bracket, opts.inner, {r, mv[c]});
          if (b.value > r) {
            r = b.value;
            mv[c] = b.x;
          }
        }
      }
    }
    row.lower_bound = r;
    row.params1 = p1;
    row.params2 = p2;
    const CMatrix d1 = ev.dictionary(p1), d2 = ev.dictionary(p2);
    row.a_denominator = e.composed_norm(d1 - d2);
    row.a_ratio = row.a_denominator > 0.0 ? (ev.codes(p1) - ev.codes(p2)).norm() / row.a_denominator : 0.0;

    BoundInputs in = BoundInputs::from(e, gm, cfg.taus, opts.delta);
    const BoundReport br = bound_constants(in, false);
    row.k_l = br.k_l;
    res.gamma = br.gamma;
    res.rows.push_back(row);
    lbs.push_back(r > 0.0 ? std::log(r) : -std::numeric_limits<double>::infinity());
  }

  if (lbs.size() >= 2) {
    std::vector<double> xs;
    for (const auto& row : res.rows) xs.push_back(static_cast<double>(row.depth));
    res.fit = least_squares_line(xs, lbs);
  }
  return res;
}

}  // namespace ewr
