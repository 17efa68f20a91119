#pragma once

#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace slspec {

enum class PotentialKind { q1_rational, square_well, tabulated, user_closed_form };

std::string to_string(PotentialKind k);

struct Decay {
  double a = 1.0;
  int k1 = 4;
  int k2 = 4;
};

// Closed-form families. rational_power is A*(1+(x/L)^p)^(-k/p) + offset,
// smooth_step is a C^1 cosine ramp from 1 to 0 over [1-delta, 1+delta].
struct ClosedForm {
  enum class Family { rational_power, smooth_step } family = Family::rational_power;
  double amplitude = 1.0;
  double scale = 1.0;
  double power = 2.0;
  double exponent = 4.0;
  double offset = 0.0;
  double delta = 0.1;
};

class Potential {
 public:
  static Potential q1(double offset = 0.0);
  static Potential square_well();
  static Potential closed_form(const ClosedForm& cf, Decay decay, std::string id);
  // Samples must be strictly increasing in x and strictly positive in Q.
  static Potential tabulated(std::vector<double> x, std::vector<double> q, Decay decay,
                             int m_smoothness = 1, bool extrapolate = true, std::string id = "tabulated");

  PotentialKind kind() const { return kind_; }
  const std::string& id() const { return id_; }
  double q0() const { return q0_; }
  const std::vector<double>& q0_derivatives() const { return q0_derivs_; }
  const Decay& decay() const { return decay_; }
  int m_smoothness() const { return m_smooth_; }
  bool compact_support() const { return support_end_ < std::numeric_limits<double>::infinity(); }
  double support_end() const { return support_end_; }
  // Points where Q jumps; integrators split there.
  const std::vector<double>& breakpoints() const { return breaks_; }
  // Table range end for tabulated kinds, +inf otherwise.
  double table_end() const;

  double eval(double x, int deriv_order = 0) const;
  double operator()(double x) const { return eval(x, 0); }

  // Unique x >= 0 with Q(x) = level on the monotone profile (0 if level >= Q(0),
  // support end if the level is never reached inside the support).
  double level_crossing(double level) const;

 private:
  struct Table;
  PotentialKind kind_ = PotentialKind::q1_rational;
  std::string id_;
  double q0_ = 1.0;
  std::vector<double> q0_derivs_;
  Decay decay_;
  int m_smooth_ = 0;
  double support_end_ = std::numeric_limits<double>::infinity();
  std::vector<double> breaks_;
  ClosedForm cf_;
  std::shared_ptr<const Table> table_;
  bool extrapolate_ = true;

  void fill_origin_derivatives(int count);
};

// Configuration: {"kind": ..., "params": {...}, "decay": {"a","k1","k2"},
// "table_path": "file.csv", "m_smoothness": n, "extrapolate": bool}.
Potential make_potential(const nlohmann::json& spec);
// Shorthand names used on the command line: q1, square_well, smooth_step,
// rational8 (A=1, p=k=8) or a path to a JSON config.
Potential make_potential_by_name(const std::string& name);

std::pair<std::vector<double>, std::vector<double>> read_table_csv(const std::string& path);

struct ClassCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ClassReport {
  std::vector<ClassCheck> checks;
  // integrability of (1+t)sqrt(Q)
  double integral_truncated = 0.0;
  double tail_bound = 0.0;
  bool tail_finite = false;
  bool all_pass() const;
  const ClassCheck* find(const std::string& name) const;
};

struct ValidateOptions {
  double x_probe = 10.0;
  int n_probe = 2001;
  double deriv_tol = 1e-8;
  double x_decay = 10.0;   // decay sandwich is tested on [x_decay, 100 x_decay]
  double x_tail = 1e3;     // integrability truncation
};

ClassReport validate_class(const Potential& p, int m, const ValidateOptions& opt = {});

}  // namespace slspec
