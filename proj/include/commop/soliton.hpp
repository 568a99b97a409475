#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "commop/rational.hpp"

namespace commop {

/// Cauchy problem for the (V, W) system on a periodic grid over [-L, L).
struct SimConfig {
  int g = 1;
  Rational a{1, 2};
  Rational alpha0{0};
  double L = 40;
  int N = 1024;
  double dt = 1e-3;
  double T = 5;
  double snapshot_every = 0.1;
  bool track_Q = false;
  bool dealias = true;

  /// Fields {g, a, alpha0, L, N, dt, T, snapshot_every, track_Q, dealias};
  /// rationals as numbers or "p/q" strings. Unknown fields are rejected.
  static SimConfig from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
  /// Throws ConfigError on an invalid configuration.
  void validate() const;
  /// Non-fatal problems, e.g. sech^2(aL) not below 1e-12.
  std::vector<std::string> warnings() const;
  long total_steps() const;
  long steps_per_snapshot() const;
};

/// Fields on the grid; q holds q_0 .. q_{g-1} (q_g = 1 is implicit).
struct SimState {
  double t = 0;
  std::vector<double> V, W;
  std::vector<std::vector<double>> q;
};

struct Diagnostics {
  double t = 0;
  double mass_V = 0, mass_W = 0, max_abs_V = 0;
  int peak_count = 0;
  std::optional<double> eq6_residual_max;
};

/// Pseudospectral integrating-factor RK4 stepper for
///   V_t = 1/4 (6 V V_x + 6 W_x + V_xxx),  W_t = 1/2 (-3 V W_x - W_xxx),
///   q_t = 1/2 (-3 V q_x - q_xxx) for each tracked coefficient.
class Simulator {
 public:
  Simulator(int N, double L, bool dealias = true);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  int N() const { return n_; }
  double L() const { return l_; }
  double dx() const { return 2 * l_ / n_; }
  std::vector<double> grid() const;

  /// Holds V fixed (its right side is dropped); for dispersion tests.
  void set_freeze_V(bool on) { freeze_v_ = on; }

  /// One step of size dt. Throws NumericalBlowup when a field is not finite.
  SimState step(const SimState& s, double dt) const;
  /// Spectral derivative of order k.
  std::vector<double> derivative(const std::vector<double>& f, int k) const;
  /// Integral over the period (spectral: dx times the sum).
  double integral(const std::vector<double>& f) const;

 private:
  using Spectrum = std::vector<std::complex<double>>;
  Spectrum forward(const std::vector<double>& f) const;
  std::vector<double> inverse(const Spectrum& f) const;
  std::vector<Spectrum> rhs(const std::vector<Spectrum>& fields) const;

  int n_;
  double l_;
  bool dealias_;
  bool freeze_v_ = false;
  std::vector<double> k_;
  std::vector<double> mask_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

/// V = alpha1 u + alpha0, W = s1 u + s2 u^2 with u = -a^2 sech^2(a x), and the
/// coefficients of Q of the rapid-decay family when track_Q is set.
SimState make_initial(const SimConfig& c, const std::vector<double>& x);

/// 4F as ascending z-coefficients for the rapid-decay family of the config.
std::vector<double> rapid_decay_curve4(const SimConfig& c);

/// Evaluates 4(z - W)Q^2 - 4V Q'^2 + Q''^2 - 2Q'Q''' + 2Q(2V'Q' + 4V Q'' + Q'''')
/// on the grid and returns max_x |coefficient of z^k - 4F_k| for each k.
std::vector<double> eq6_residual(const Simulator& sim, const SimState& s,
                                 const std::vector<double>& four_F);

/// Local maxima of f - baseline above fraction times its global maximum,
/// merged when not farther apart than min_separation (periodic distance when
/// period > 0).
int count_peaks(const std::vector<double>& x, const std::vector<double>& f, double baseline,
                double min_separation = 5, double period = 0, double fraction = 0.5);

struct RunResult {
  std::vector<Diagnostics> diagnostics;
  SimState final_state;
  bool aborted = false;
  std::string message;
};

/// Runs the configured problem; on_snapshot sees every snapshot, t = 0 included.
RunResult run(const SimConfig& c,
              const std::function<void(const SimState&, const Diagnostics&)>& on_snapshot = {});

/// Shortest round-trip decimal text for a double.
std::string format_double(double v);
/// "snap_t<time>.csv" with four decimals.
std::string snapshot_name(double t);
std::string snapshot_csv(const std::vector<double>& x, const SimState& s);
std::string diagnostics_header(bool with_eq6);
std::string diagnostics_row(const Diagnostics& d);
/// Writes via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace commop
