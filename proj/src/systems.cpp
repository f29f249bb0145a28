#include "latdyn/errors.hpp"
#include "latdyn/outer_approximation.hpp"

#include <boost/numeric/interval.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace latdyn {

namespace {

namespace il = boost::numeric::interval_lib;
using I = boost::numeric::interval<
    double, il::policies<il::save_state<il::rounded_arith_std<double>>, il::checking_base<double>>>;

constexpr double kInf = std::numeric_limits<double>::infinity();

I widen(const I& x) { return I(std::nextafter(x.lower(), -kInf), std::nextafter(x.upper(), kInf)); }

/// Range of a continuous scalar map over [a, b]: hull of the values at the
/// endpoints and at every critical point that may lie in [a, b]. `crit`
/// are enclosures of the critical points.
template <class F>
I range_1d(F f, const std::vector<I>& crit, double a, double b) {
  I r = boost::numeric::hull(f(I(a)), f(I(b)));
  for (const I& c : crit) {
    if (c.upper() < a || c.lower() > b) continue;
    r = boost::numeric::hull(r, f(I(std::max(a, c.lower()), std::min(b, c.upper()))));
  }
  return widen(r);
}

Box box_1d(double lo, double hi) { return Box({Dyadic::down(lo)}, {Dyadic::up(hi)}); }

std::vector<double> parse_params(const std::string& text, std::size_t expected, const std::string& id) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size() || !std::isfinite(v))
      fail(ErrorKind::config, "system '" + id + "': bad parameter '" + tok + "'");
    out.push_back(v);
  }
  if (out.size() != expected)
    fail(ErrorKind::config, "system '" + id + "' expects " + std::to_string(expected) + " parameter(s)");
  return out;
}

template <class F>
BoxImageOracle scalar_system(std::string name, Box domain, F f, std::vector<I> crit, double lipschitz) {
  BoxImageOracle o;
  o.name = std::move(name);
  o.domain = std::move(domain);
  o.guaranteed = true;
  o.lipschitz_hint = lipschitz;
  o.image = [f, crit](const FloatBox& b) {
    I r = range_1d(f, crit, b.lo[0], b.hi[0]);
    return std::vector<FloatBox>{FloatBox{{r.lower()}, {r.upper()}}};
  };
  o.point = [f](const std::vector<double>& x) { return std::vector<double>{f(x[0])}; };
  return o;
}

BoxImageOracle quadratic() {
  auto f = [](auto x) { return x * x; };
  return scalar_system("quadratic", box_1d(0, 1), f, {I(0.0)}, 2.0);
}

BoxImageOracle logistic(double a) {
  auto f = [a](auto x) {
    using T = decltype(x);
    return T(a) * x * (T(1.0) - x);
  };
  std::ostringstream name;
  name << "logistic:" << a;
  return scalar_system(name.str(), box_1d(0, 1), f, {I(0.5)}, std::fabs(a));
}

BoxImageOracle cubicwell(double lam) {
  // x + λx(1 - x²); critical points ±sqrt((1+λ)/(3λ)) when λ > 0
  auto f = [lam](auto x) {
    using T = decltype(x);
    return x + T(lam) * x * (T(1.0) - x * x);
  };
  std::vector<I> crit;
  if (lam > 0) {
    I c = boost::numeric::sqrt((I(1.0) + I(lam)) / (I(3.0) * I(lam)));
    crit = {c, -c};
  } else if (lam < 0 && (1 + lam) < 0) {
    I c = boost::numeric::sqrt((I(1.0) + I(lam)) / (I(3.0) * I(lam)));
    crit = {c, -c};
  }
  std::ostringstream name;
  name << "cubicwell:" << lam;
  return scalar_system(name.str(), box_1d(-2, 2), f, crit, std::max(std::fabs(1 + lam), std::fabs(1 - 11 * lam)));
}

BoxImageOracle henon(double a, double b) {
  BoxImageOracle o;
  std::ostringstream name;
  name << "henon:" << a << "," << b;
  o.name = name.str();
  o.domain = Box({Dyadic::from_int(-2), Dyadic::from_int(-2)}, {Dyadic::from_int(2), Dyadic::from_int(2)});
  o.guaranteed = true;
  o.image = [a, b](const FloatBox& bx) {
    I x(bx.lo[0], bx.hi[0]), y(bx.lo[1], bx.hi[1]);
    I u = widen(I(1.0) - I(a) * boost::numeric::square(x) + y);
    I v = widen(I(b) * x);
    return std::vector<FloatBox>{FloatBox{{u.lower(), v.lower()}, {u.upper(), v.upper()}}};
  };
  o.point = [a, b](const std::vector<double>& p) {
    return std::vector<double>{1 - a * p[0] * p[0] + p[1], b * p[0]};
  };
  return o;
}

std::vector<double> rk4(const FlowConfig& fc, std::vector<double> x) {
  const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fc.tau / fc.step)));
  const double h = fc.tau / static_cast<double>(steps);
  const std::size_t d = x.size();
  std::vector<double> tmp(d);
  for (std::size_t s = 0; s < steps; ++s) {
    auto k1 = fc.field(x);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    auto k2 = fc.field(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    auto k3 = fc.field(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * k3[i];
    auto k4 = fc.field(tmp);
    for (std::size_t i = 0; i < d; ++i) x[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return x;
}

}  // namespace

BoxImageOracle time_tau_oracle(const FlowConfig& fc, Box domain, std::string name) {
  if (!(fc.tau > 0)) fail(ErrorKind::config, "flow time must be positive");
  if (!(fc.padding > 0)) fail(ErrorKind::config, "flow padding must be positive");
  if (!(fc.step > 0)) fail(ErrorKind::config, "flow step must be positive");
  BoxImageOracle o;
  o.name = std::move(name);
  o.domain = std::move(domain);
  o.guaranteed = false;
  o.image = [fc](const FloatBox& b) {
    const std::size_t d = b.dim();
    std::vector<double> lo(d, kInf), hi(d, -kInf), mean(d, 0.0);
    std::size_t corners = std::size_t{1} << d;
    for (std::size_t m = 0; m < corners; ++m) {
      std::vector<double> p(d);
      for (std::size_t i = 0; i < d; ++i) p[i] = (m >> i) & 1 ? b.hi[i] : b.lo[i];
      auto q = rk4(fc, p);
      for (std::size_t i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], q[i]);
        hi[i] = std::max(hi[i], q[i]);
        mean[i] += q[i] / static_cast<double>(corners);
      }
    }
    std::vector<double> c(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = 0.5 * (b.lo[i] + b.hi[i]);
    auto qc = rk4(fc, c);
    double grow = 0;
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], qc[i]);
      hi[i] = std::max(hi[i], qc[i]);
      grow = std::max(grow, std::fabs(qc[i] - mean[i]));
    }
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] -= fc.padding + grow;
      hi[i] += fc.padding + grow;
    }
    return std::vector<FloatBox>{FloatBox{lo, hi}};
  };
  o.point = [fc](const std::vector<double>& x) { return rk4(fc, x); };
  return o;
}

BoxImageOracle make_system(const std::string& id) {
  auto colon = id.find(':');
  std::string head = id.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : id.substr(colon + 1);
  if (head == "quadratic") {
    if (colon != std::string::npos) fail(ErrorKind::config, "system 'quadratic' takes no parameters");
    return quadratic();
  }
  if (head == "logistic") return logistic(parse_params(rest, 1, head)[0]);
  if (head == "cubicwell") return cubicwell(parse_params(rest, 1, head)[0]);
  if (head == "henon") {
    auto p = parse_params(rest, 2, head);
    return henon(p[0], p[1]);
  }
  if (head == "flow") {
    auto c2 = rest.find(':');
    std::string field = rest.substr(0, c2);
    if (field != "doublewell" || c2 == std::string::npos)
      fail(ErrorKind::config, "unknown flow '" + field + "' (known: doublewell:tau,pad)");
    auto p = parse_params(rest.substr(c2 + 1), 2, "flow:doublewell");
    FlowConfig fc;
    fc.field = [](const std::vector<double>& x) { return std::vector<double>{x[0] - x[0] * x[0] * x[0]}; };
    fc.tau = p[0];
    fc.padding = p[1];
    fc.step = 1e-3;
    return time_tau_oracle(fc, box_1d(-2, 2), id);
  }
  fail(ErrorKind::config, "unknown system '" + id + "'");
}

std::vector<std::string> system_ids() {
  return {"quadratic", "logistic:a", "cubicwell:lambda", "henon:a,b", "flow:doublewell:tau,pad"};
}

}  // namespace latdyn
