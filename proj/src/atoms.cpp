#include "slf/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "slf/errors.hpp"
#include "slf/util.hpp"

namespace slf::atoms {

namespace cn = slf::constants;

const Line& TransitionTable::line(const std::string& label) const {
  for (const auto& l : lines)
    if (l.label == label) return l;
  throw ConfigError("atomic table: line '" + label + "' not present");
}

void TransitionTable::validate() const {
  if (lines.empty()) throw ConfigError("atomic table: no lines");
  bool has_d2 = false;
  for (const auto& l : lines) {
    if (l.lambda_nm <= 0) throw ConfigError("atomic table: lambda_nm must be > 0");
    if (l.gamma0_rad_s <= 0) throw ConfigError("atomic table: gamma0_rad_s must be > 0");
    if (l.d_Cm <= 0) throw ConfigError("atomic table: reduced_dipole_Cm must be > 0");
    if (l.label == "D2") has_d2 = true;
  }
  if (!has_d2) throw ConfigError("atomic table: D2 line entry is required");
}

std::vector<double> TransitionTable::ground_F() const {
  // S_1/2 ground state: F = I +- 1/2
  return {std::abs(nuclear_spin - 0.5), nuclear_spin + 0.5};
}

std::vector<double> TransitionTable::excited_F(const Line& l) const {
  std::vector<double> out;
  for (double F = std::abs(l.Jp - nuclear_spin); F <= l.Jp + nuclear_spin + 1e-9; F += 1.0)
    out.push_back(F);
  return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    // trim
    size_t b = cur.find_first_not_of(" \t\r");
    size_t e = cur.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

TransitionTable TransitionTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open atomic data file: " + path);
  std::string ln;
  if (!std::getline(in, ln) || ln.rfind("# slf-atomic-data v1", 0) != 0)
    throw ConfigError("atomic data file: missing '# slf-atomic-data v1' version header: " + path);
  TransitionTable t;
  bool header_seen = false;
  const std::vector<std::string> expect = {"label", "lambda_nm", "reduced_dipole_Cm",
                                           "gamma0_rad_s", "J", "Jp"};
  while (std::getline(in, ln)) {
    if (ln.empty() || ln[0] == '#') continue;
    auto cols = split_csv(ln);
    if (!header_seen) {
      if (cols != expect)
        throw ConfigError("atomic data file: unexpected columns (strict schema): " + ln);
      header_seen = true;
      continue;
    }
    if (cols.size() != expect.size())
      throw ConfigError("atomic data file: wrong number of fields: " + ln);
    Line l;
    l.label = cols[0];
    l.lambda_nm = std::stod(cols[1]);
    l.d_Cm = std::stod(cols[2]);
    l.gamma0_rad_s = std::stod(cols[3]);
    l.J = std::stod(cols[4]);
    l.Jp = std::stod(cols[5]);
    t.lines.push_back(l);
  }
  t.validate();
  return t;
}

std::string TransitionTable::to_csv() const {
  std::string out = "# slf-atomic-data v1\n";
  out += "label,lambda_nm,reduced_dipole_Cm,gamma0_rad_s,J,Jp\n";
  for (const auto& l : lines) {
    out += l.label + "," + util::fmt_g9(l.lambda_nm) + "," + util::fmt_g9(l.d_Cm) + "," +
           util::fmt_g9(l.gamma0_rad_s) + "," + util::fmt_g9(l.J) + "," + util::fmt_g9(l.Jp) +
           "\n";
  }
  return out;
}

TransitionTable TransitionTable::rb87_builtin() {
  TransitionTable t;
  t.lines.push_back(Line{"D1", 794.978851, 2.53744e-29, 3.61031e7, 0.5, 0.5});
  t.lines.push_back(Line{"D2", 780.241209, 3.58424e-29, 3.81174e7, 0.5, 1.5});
  return t;
}

Polarizability polarizability(const TransitionTable& t, double omega, bool imaginary_axis) {
  Polarizability p;
  p.omega = omega;
  p.imaginary_axis = imaginary_axis;
  double s = 0.0, v = 0.0;
  for (const auto& l : t.lines) {
    double wk = l.omega();
    double denom = imaginary_axis ? (wk * wk + omega * omega) : (wk * wk - omega * omega);
    if (!imaginary_axis && std::abs(wk - omega) < 10.0 * l.gamma0_rad_s)
      throw ResonanceError("polarizability: frequency within 10 linewidths of line " + l.label);
    double d2 = l.d_Cm * l.d_Cm;
    s += (2.0 / 3.0) * d2 * wk / (cn::hbar * denom);
    // vector part: J'=3/2 contributes +d^2/2, J'=1/2 contributes -d^2
    double wgt = (std::abs(l.Jp - 1.5) < 1e-9) ? 0.5 : -1.0;
    double vnum = imaginary_axis ? 0.0 : omega;  // odd in omega; 0 on the imaginary axis by parity
    v += (2.0 / 3.0) * wgt * d2 * 2.0 * vnum / (cn::hbar * denom);
  }
  p.alpha_s = s;
  p.alpha_v_J = v;
  return p;
}

double alpha_scalar_imag(const TransitionTable& t, double xi) {
  return polarizability(t, xi, true).alpha_s;
}

double vector_polarizability_F(const TransitionTable& t, double F, double omega) {
  double J = 0.5, I = t.nuclear_spin;
  double gK = (F * (F + 1) + J * (J + 1) - I * (I + 1)) / (2 * F * (F + 1));
  return 2 * F * gK * polarizability(t, omega).alpha_v_J;
}

}  // namespace slf::atoms
