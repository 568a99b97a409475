#include "commop/soliton.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>

#include "commop/errors.hpp"
#include "commop/family.hpp"
#include "commop/func_ring.hpp"
#include "commop/qbuilder.hpp"

namespace commop {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

Rational rational_field(const nlohmann::json& v, const char* name) {
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number()) return Rational::parse(v.dump());
  throw ConfigError(std::string("config field '") + name + "' must be a number or \"p/q\" string");
}

double number_field(const nlohmann::json& v, const char* name) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return rational_field(v, name).to_double();
  throw ConfigError(std::string("config field '") + name + "' must be a number");
}

bool bool_field(const nlohmann::json& v, const char* name) {
  if (!v.is_boolean()) throw ConfigError(std::string("config field '") + name + "' must be a boolean");
  return v.get<bool>();
}

long ratio_steps(double span, double dt, const char* what) {
  const double r = span / dt;
  const long n = std::lround(r);
  if (std::abs(r - static_cast<double>(n)) > 1e-9 * std::max(1.0, r)) {
    throw ConfigError(std::string(what) + " must be a whole multiple of dt");
  }
  return n;
}

double sech(double v) { return 1 / std::cosh(v); }

Family rapid_decay_family(const SimConfig& c) {
  return Family::make(FamilyTag::RapidDecay, c.g, {{"alpha0", c.alpha0}, {"a", c.a}});
}

}  // namespace

SimConfig SimConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  SimConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "g") {
      if (!v.is_number_integer()) throw ConfigError("config field 'g' must be an integer");
      c.g = v.get<int>();
    } else if (key == "a") {
      c.a = rational_field(v, "a");
    } else if (key == "alpha0") {
      c.alpha0 = rational_field(v, "alpha0");
    } else if (key == "L") {
      c.L = number_field(v, "L");
    } else if (key == "N") {
      if (!v.is_number_integer()) throw ConfigError("config field 'N' must be an integer");
      c.N = v.get<int>();
    } else if (key == "dt") {
      c.dt = number_field(v, "dt");
    } else if (key == "T") {
      c.T = number_field(v, "T");
    } else if (key == "snapshot_every") {
      c.snapshot_every = number_field(v, "snapshot_every");
    } else if (key == "track_Q") {
      c.track_Q = bool_field(v, "track_Q");
    } else if (key == "dealias") {
      c.dealias = bool_field(v, "dealias");
    } else {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
  c.validate();
  return c;
}

nlohmann::ordered_json SimConfig::to_json() const {
  nlohmann::ordered_json j;
  j["g"] = g;
  j["a"] = a.str();
  j["alpha0"] = alpha0.str();
  j["L"] = L;
  j["N"] = N;
  j["dt"] = dt;
  j["T"] = T;
  j["snapshot_every"] = snapshot_every;
  j["track_Q"] = track_Q;
  j["dealias"] = dealias;
  return j;
}

void SimConfig::validate() const {
  if (g < 1) throw ConfigError("g must be >= 1");
  if (a.sign() <= 0) throw ConfigError("a must be positive");
  if (N < 16 || (N & (N - 1)) != 0) throw ConfigError("N must be a power of two (>= 16)");
  if (!(L > 0) || !std::isfinite(L)) throw ConfigError("L must be positive");
  if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(T >= 0) || !std::isfinite(T)) throw ConfigError("T must be non-negative");
  if (!(snapshot_every > 0)) throw ConfigError("snapshot_every must be positive");
  ratio_steps(T, dt, "T");
  ratio_steps(snapshot_every, dt, "snapshot_every");
}

std::vector<std::string> SimConfig::warnings() const {
  std::vector<std::string> w;
  const double tail = std::pow(sech(a.to_double() * L), 2);
  if (!(tail < 1e-12)) {
    std::ostringstream os;
    os << "sech^2(a L) = " << tail << " is not below 1e-12; periodization error may be visible";
    w.push_back(os.str());
  }
  return w;
}

long SimConfig::total_steps() const { return ratio_steps(T, dt, "T"); }
long SimConfig::steps_per_snapshot() const { return ratio_steps(snapshot_every, dt, "snapshot_every"); }

struct Simulator::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan r2c = nullptr, c2r = nullptr;
};

Simulator::Simulator(int N, double L, bool dealias)
    : n_(N), l_(L), dealias_(dealias), plans_(std::make_unique<Plans>()) {
  if (N < 4 || (N & (N - 1)) != 0) throw ConfigError("N must be a power of two");
  const int m = N / 2 + 1;
  k_.resize(static_cast<size_t>(m));
  mask_.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    // The Nyquist mode carries no derivative.
    k_[static_cast<size_t>(i)] = i == N / 2 ? 0.0 : std::numbers::pi * i / L;
    mask_[static_cast<size_t>(i)] = !dealias || 3 * i <= N ? 1.0 : 0.0;
  }
  std::lock_guard lock(planner_mutex());
  plans_->real = fftw_alloc_real(static_cast<size_t>(N));
  plans_->spec = fftw_alloc_complex(static_cast<size_t>(m));
  plans_->r2c = fftw_plan_dft_r2c_1d(N, plans_->real, plans_->spec, FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r_1d(N, plans_->spec, plans_->real, FFTW_ESTIMATE);
}

Simulator::~Simulator() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->r2c);
  fftw_destroy_plan(plans_->c2r);
  fftw_free(plans_->real);
  fftw_free(plans_->spec);
}

std::vector<double> Simulator::grid() const {
  std::vector<double> x(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) x[static_cast<size_t>(i)] = -l_ + i * dx();
  return x;
}

Simulator::Spectrum Simulator::forward(const std::vector<double>& f) const {
  std::copy(f.begin(), f.end(), plans_->real);
  fftw_execute(plans_->r2c);
  Spectrum out(k_.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = {plans_->spec[i][0], plans_->spec[i][1]};
  return out;
}

std::vector<double> Simulator::inverse(const Spectrum& f) const {
  for (size_t i = 0; i < f.size(); ++i) {
    plans_->spec[i][0] = f[i].real();
    plans_->spec[i][1] = f[i].imag();
  }
  fftw_execute(plans_->c2r);
  std::vector<double> out(plans_->real, plans_->real + n_);
  for (auto& v : out) v /= n_;
  return out;
}

std::vector<double> Simulator::derivative(const std::vector<double>& f, int k) const {
  Spectrum s = forward(f);
  for (size_t i = 0; i < s.size(); ++i) s[i] *= std::pow(std::complex<double>(0, k_[i]), k);
  return inverse(s);
}

double Simulator::integral(const std::vector<double>& f) const {
  double sum = 0;
  for (double v : f) sum += v;
  return sum * dx();
}

std::vector<Simulator::Spectrum> Simulator::rhs(const std::vector<Spectrum>& fields) const {
  const std::complex<double> I(0, 1);
  const size_t m = k_.size();
  auto ddx = [&](const Spectrum& s) {
    Spectrum d(m);
    for (size_t i = 0; i < m; ++i) d[i] = I * k_[i] * s[i];
    return d;
  };
  const std::vector<double> V = inverse(fields[0]);
  std::vector<Spectrum> out(fields.size(), Spectrum(m));

  if (!freeze_v_) {
    // 3/2 V V_x + 3/2 W_x = (3/4 V^2)_x + 3/2 W_x
    std::vector<double> v2(V.size());
    for (size_t i = 0; i < V.size(); ++i) v2[i] = V[i] * V[i];
    const Spectrum s = forward(v2);
    for (size_t i = 0; i < m; ++i) {
      out[0][i] = I * k_[i] * (0.75 * mask_[i] * s[i] + 1.5 * fields[1][i]);
    }
  }
  // -3/2 V f_x for W and every tracked q_j.
  for (size_t f = 1; f < fields.size(); ++f) {
    const std::vector<double> fx = inverse(ddx(fields[f]));
    std::vector<double> prod(V.size());
    for (size_t i = 0; i < V.size(); ++i) prod[i] = V[i] * fx[i];
    const Spectrum s = forward(prod);
    for (size_t i = 0; i < m; ++i) out[f][i] = -1.5 * mask_[i] * s[i];
  }
  return out;
}

SimState Simulator::step(const SimState& s, double dt) const {
  const std::complex<double> I(0, 1);
  const size_t m = k_.size();
  std::vector<Spectrum> u;
  u.push_back(forward(s.V));
  u.push_back(forward(s.W));
  for (const auto& q : s.q) u.push_back(forward(q));

  // Linear symbols: V gets 1/4 d^3, the others -1/2 d^3; (ik)^3 = -i k^3.
  std::vector<Spectrum> e_half(u.size(), Spectrum(m)), e_full(u.size(), Spectrum(m));
  for (size_t f = 0; f < u.size(); ++f) {
    for (size_t i = 0; i < m; ++i) {
      const double k3 = k_[i] * k_[i] * k_[i];
      const std::complex<double> lam =
          f == 0 ? (freeze_v_ ? std::complex<double>(0) : -0.25 * I * k3) : 0.5 * I * k3;
      e_half[f][i] = std::exp(lam * (dt / 2));
      e_full[f][i] = std::exp(lam * dt);
    }
  }
  auto combine = [&](const std::vector<Spectrum>& base, const std::vector<Spectrum>* ebase,
                     const std::vector<Spectrum>& inc, const std::vector<Spectrum>* einc, double h) {
    std::vector<Spectrum> r(base.size(), Spectrum(m));
    for (size_t f = 0; f < base.size(); ++f) {
      for (size_t i = 0; i < m; ++i) {
        const std::complex<double> b = ebase ? (*ebase)[f][i] * base[f][i] : base[f][i];
        const std::complex<double> d = einc ? (*einc)[f][i] * inc[f][i] : inc[f][i];
        r[f][i] = b + h * d;
      }
    }
    return r;
  };

  // Lawson RK4 on v = exp(-Lambda t) u.
  const auto k1 = rhs(u);
  const auto k2 = rhs(combine(u, &e_half, k1, &e_half, dt / 2));
  const auto k3 = rhs(combine(u, &e_half, k2, nullptr, dt / 2));
  const auto k4 = rhs(combine(u, &e_full, k3, &e_half, dt));

  SimState out;
  out.t = s.t + dt;
  std::vector<Spectrum> next(u.size(), Spectrum(m));
  for (size_t f = 0; f < u.size(); ++f) {
    for (size_t i = 0; i < m; ++i) {
      const std::complex<double> v = e_full[f][i] * (u[f][i] + dt / 6 * k1[f][i]) +
                                     e_half[f][i] * (dt / 3) * (k2[f][i] + k3[f][i]) +
                                     dt / 6 * k4[f][i];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "non-finite field at t = " << out.t << " (last stable time " << s.t << ")";
        throw NumericalBlowup(os.str());
      }
      next[f][i] = v;
    }
  }
  out.V = freeze_v_ ? s.V : inverse(next[0]);
  out.W = inverse(next[1]);
  for (size_t f = 2; f < next.size(); ++f) out.q.push_back(inverse(next[f]));
  return out;
}

SimState make_initial(const SimConfig& c, const std::vector<double>& x) {
  const Family f = rapid_decay_family(c);
  const double a = c.a.to_double();
  std::vector<double> u(x.size()), up(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double s = sech(a * x[i]);
    u[i] = -a * a * s * s;
    up[i] = 2 * a * a * a * s * s * std::tanh(a * x[i]);
  }
  SimState st;
  st.V = eval_grid(f.V(), Rational(0), u, up);
  st.W = eval_grid(f.W(), Rational(0), u, up);
  if (c.track_Q) {
    const QPolynomial Q = solve_Q(f);
    for (int j = 0; j < c.g; ++j) st.q.push_back(eval_grid(Q.q(j), Rational(0), u, up));
  }
  return st;
}

std::vector<double> rapid_decay_curve4(const SimConfig& c) {
  const Family f = rapid_decay_family(c);
  const SpectralCurve F = extract_curve(solve_Q(f), f);
  std::vector<double> out;
  for (const auto& v : F.F.coefficients()) out.push_back((v * 4).to_double());
  return out;
}

namespace {

using Field = std::vector<double>;
using FieldPoly = std::vector<Field>;  // ascending in z

FieldPoly pmul(const FieldPoly& a, const FieldPoly& b) {
  const size_t n = a.front().size();
  FieldPoly c(a.size() + b.size() - 1, Field(n, 0.0));
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      for (size_t x = 0; x < n; ++x) c[i + j][x] += a[i][x] * b[j][x];
    }
  }
  return c;
}

FieldPoly pscale(FieldPoly a, const Field& f, double s) {
  for (auto& c : a) {
    for (size_t x = 0; x < c.size(); ++x) c[x] *= s * f[x];
  }
  return a;
}

void padd(FieldPoly& acc, const FieldPoly& b, double s = 1) {
  if (acc.size() < b.size()) acc.resize(b.size(), Field(b.front().size(), 0.0));
  for (size_t i = 0; i < b.size(); ++i) {
    for (size_t x = 0; x < b[i].size(); ++x) acc[i][x] += s * b[i][x];
  }
}

}  // namespace

std::vector<double> eq6_residual(const Simulator& sim, const SimState& s,
                                 const std::vector<double>& four_F) {
  const size_t n = s.V.size();
  const int g = static_cast<int>(s.q.size());
  const Field ones(n, 1.0), zeros(n, 0.0);
  // D[k] = k-th x-derivative of Q as a z-polynomial.
  std::vector<FieldPoly> D(5);
  for (int k = 0; k <= 4; ++k) {
    for (int j = 0; j < g; ++j) D[k].push_back(k == 0 ? s.q[j] : sim.derivative(s.q[j], k));
    D[k].push_back(k == 0 ? ones : zeros);
  }
  const Field& V = s.V;
  const Field V1 = sim.derivative(V, 1);
  const FieldPoly Q2 = pmul(D[0], D[0]);

  FieldPoly total;
  FieldPoly zQ2(Q2.size() + 1, zeros);
  for (size_t i = 0; i < Q2.size(); ++i) zQ2[i + 1] = Q2[i];
  padd(total, zQ2, 4);
  padd(total, pscale(Q2, s.W, 1), -4);
  padd(total, pscale(pmul(D[1], D[1]), V, 1), -4);
  padd(total, pmul(D[2], D[2]));
  padd(total, pmul(D[1], D[3]), -2);
  FieldPoly inner = pscale(D[1], V1, 2);
  padd(inner, pscale(D[2], V, 4));
  padd(inner, D[4]);
  padd(total, pmul(D[0], inner), 2);

  std::vector<double> res(std::max(total.size(), four_F.size()), 0.0);
  for (size_t k = 0; k < res.size(); ++k) {
    const double f = k < four_F.size() ? four_F[k] : 0.0;
    double m = 0;
    for (size_t x = 0; x < n; ++x) {
      const double v = (k < total.size() ? total[k][x] : 0.0) - f;
      m = std::max(m, std::abs(v));
    }
    res[k] = m;
  }
  return res;
}

int count_peaks(const std::vector<double>& x, const std::vector<double>& f, double baseline,
                double min_separation, double period, double fraction) {
  const size_t n = f.size();
  if (n < 3) return 0;
  double top = -INFINITY;
  for (double v : f) top = std::max(top, v - baseline);
  if (!(top > 0)) return 0;
  std::vector<size_t> cand;
  for (size_t i = 0; i < n; ++i) {
    const double v = f[i] - baseline;
    const double l = f[(i + n - 1) % n] - baseline, r = f[(i + 1) % n] - baseline;
    if (v > fraction * top && v > l && v >= r) cand.push_back(i);
  }
  std::stable_sort(cand.begin(), cand.end(), [&](size_t a, size_t b) { return f[a] > f[b]; });
  auto dist = [&](size_t a, size_t b) {
    double d = std::abs(x[a] - x[b]);
    if (period > 0) d = std::min(d, period - d);
    return d;
  };
  std::vector<size_t> kept;
  for (size_t c : cand) {
    if (std::all_of(kept.begin(), kept.end(), [&](size_t k) { return dist(c, k) > min_separation; })) {
      kept.push_back(c);
    }
  }
  return static_cast<int>(kept.size());
}

RunResult run(const SimConfig& c,
              const std::function<void(const SimState&, const Diagnostics&)>& on_snapshot) {
  c.validate();
  Simulator sim(c.N, c.L, c.dealias);
  const auto x = sim.grid();
  std::vector<double> four_F;
  if (c.track_Q) four_F = rapid_decay_curve4(c);
  double scale = 0;
  for (double v : four_F) scale = std::max(scale, std::abs(v));
  const double alpha0 = c.alpha0.to_double();

  auto diagnose = [&](const SimState& s) {
    Diagnostics d;
    d.t = s.t;
    d.mass_V = sim.integral(s.V);
    d.mass_W = sim.integral(s.W);
    for (double v : s.V) d.max_abs_V = std::max(d.max_abs_V, std::abs(v));
    d.peak_count = count_peaks(x, s.V, alpha0, 5, 2 * c.L);
    if (c.track_Q) {
      double m = 0;
      for (double r : eq6_residual(sim, s, four_F)) m = std::max(m, r);
      d.eq6_residual_max = scale > 0 ? m / scale : m;
    }
    return d;
  };

  RunResult result;
  SimState s = make_initial(c, x);
  const long total = c.total_steps(), every = c.steps_per_snapshot();
  auto emit = [&](const SimState& st) {
    const Diagnostics d = diagnose(st);
    result.diagnostics.push_back(d);
    if (on_snapshot) on_snapshot(st, d);
  };
  emit(s);
  for (long n = 1; n <= total; ++n) {
    try {
      SimState next = sim.step(s, c.dt);
      next.t = static_cast<double>(n) * c.dt;
      s = std::move(next);
    } catch (const NumericalBlowup& e) {
      result.aborted = true;
      result.message = e.what();
      break;
    }
    if (n % every == 0 || n == total) emit(s);
  }
  result.final_state = std::move(s);
  return result;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "snap_t%.4f.csv", t);
  return buf;
}

std::string snapshot_csv(const std::vector<double>& x, const SimState& s) {
  std::string out = "x,V,W";
  for (size_t j = 0; j < s.q.size(); ++j) out += ",q" + std::to_string(j);
  out += "\n";
  for (size_t i = 0; i < x.size(); ++i) {
    out += format_double(x[i]) + "," + format_double(s.V[i]) + "," + format_double(s.W[i]);
    for (const auto& q : s.q) out += "," + format_double(q[i]);
    out += "\n";
  }
  return out;
}

std::string diagnostics_header(bool with_eq6) {
  return std::string("t,mass_V,mass_W,max_abs_V,peak_count") + (with_eq6 ? ",eq6_residual_max" : "") +
         "\n";
}

std::string diagnostics_row(const Diagnostics& d) {
  std::string out = format_double(d.t) + "," + format_double(d.mass_V) + "," +
                    format_double(d.mass_W) + "," + format_double(d.max_abs_V) + "," +
                    std::to_string(d.peak_count);
  if (d.eq6_residual_max) out += "," + format_double(*d.eq6_residual_max);
  return out + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw Error("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
}

}  // namespace commop
