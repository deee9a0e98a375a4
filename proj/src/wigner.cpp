#include "slf/wigner.hpp"

#include <cmath>
#include <string>

#include "slf/errors.hpp"

namespace slf::atoms {

namespace {

constexpr int kMaxFact = 64;

const long double* fact_table() {
  static long double f[kMaxFact + 1];
  static bool init = [] {
    f[0] = 1.0L;
    for (int i = 1; i <= kMaxFact; ++i) f[i] = f[i - 1] * i;
    return true;
  }();
  (void)init;
  return f;
}

long double fact(int n) { return fact_table()[n]; }

bool is_half_integer(double x) { return std::abs(2 * x - std::lround(2 * x)) < 1e-9; }

// twice the value as an exact integer
int tw(double x) { return static_cast<int>(std::lround(2 * x)); }

bool triangle_ok(int tj1, int tj2, int tj3) {
  return tj3 >= std::abs(tj1 - tj2) && tj3 <= tj1 + tj2 && (tj1 + tj2 + tj3) % 2 == 0;
}

}  // namespace

double wigner3j(double j1, double j2, double j3, double m1, double m2, double m3) {
  for (double v : {j1, j2, j3, m1, m2, m3})
    if (!is_half_integer(v)) throw DomainError("wigner3j: arguments must be half-integers");
  for (auto [j, m] : {std::pair{j1, m1}, {j2, m2}, {j3, m3}}) {
    if (j < 0) throw DomainError("wigner3j: j must be non-negative");
    if (std::abs(m) > j + 1e-9) throw DomainError("wigner3j: |m| > j");
    if ((tw(j) - tw(m)) % 2 != 0) throw DomainError("wigner3j: j and m must differ by an integer");
  }
  int tj1 = tw(j1), tj2 = tw(j2), tj3 = tw(j3);
  int tm1 = tw(m1), tm2 = tw(m2), tm3 = tw(m3);
  if (tm1 + tm2 + tm3 != 0) return 0.0;
  if (!triangle_ok(tj1, tj2, tj3)) return 0.0;

  auto half = [](int t) { return t / 2; };  // exact for even t
  int a1 = half(tj1 + tj2 - tj3);
  int a2 = half(tj1 - tj2 + tj3);
  int a3 = half(-tj1 + tj2 + tj3);
  int a4 = half(tj1 + tj2 + tj3) + 1;
  long double delta = sqrtl(fact(a1) * fact(a2) * fact(a3) / fact(a4));

  int j1m1 = half(tj1 - tm1), j1p1 = half(tj1 + tm1);
  int j2m2 = half(tj2 - tm2), j2p2 = half(tj2 + tm2);
  int j3m3 = half(tj3 - tm3), j3p3 = half(tj3 + tm3);
  long double pre =
      sqrtl(fact(j1m1) * fact(j1p1) * fact(j2m2) * fact(j2p2) * fact(j3m3) * fact(j3p3));

  int t_min = std::max({0, half(tj2 - tj3 - tm1), half(tj1 - tj3 + tm2)});
  int t_max = std::min({a1, j1m1, j2p2});
  long double sum = 0.0L;
  for (int t = t_min; t <= t_max; ++t) {
    long double term = fact(t) * fact(half(tj3 - tj2 + tm1) + t) * fact(half(tj3 - tj1 - tm2) + t) *
                       fact(a1 - t) * fact(j1m1 - t) * fact(j2p2 - t);
    sum += ((t % 2) ? -1.0L : 1.0L) / term;
  }
  int phase_exp = half(tj1 - tj2 - tm3);
  long double sign = (((phase_exp % 2) + 2) % 2) ? -1.0L : 1.0L;
  return static_cast<double>(sign * delta * pre * sum);
}

double wigner6j(double j1, double j2, double j3, double j4, double j5, double j6) {
  for (double v : {j1, j2, j3, j4, j5, j6})
    if (!is_half_integer(v) || v < 0) throw DomainError("wigner6j: invalid argument");
  int t[6] = {tw(j1), tw(j2), tw(j3), tw(j4), tw(j5), tw(j6)};
  if (!triangle_ok(t[0], t[1], t[2]) || !triangle_ok(t[0], t[4], t[5]) ||
      !triangle_ok(t[3], t[1], t[5]) || !triangle_ok(t[3], t[4], t[2]))
    return 0.0;

  auto half = [](int x) { return x / 2; };
  auto tri = [&](int ta, int tb, int tc) {
    return sqrtl(fact(half(ta + tb - tc)) * fact(half(ta - tb + tc)) *
                 fact(half(-ta + tb + tc)) / fact(half(ta + tb + tc) + 1));
  };
  long double pre = tri(t[0], t[1], t[2]) * tri(t[0], t[4], t[5]) * tri(t[3], t[1], t[5]) *
                    tri(t[3], t[4], t[2]);

  int s1 = half(t[0] + t[1] + t[2]);
  int s2 = half(t[0] + t[4] + t[5]);
  int s3 = half(t[3] + t[1] + t[5]);
  int s4 = half(t[3] + t[4] + t[2]);
  int q1 = half(t[0] + t[1] + t[3] + t[4]);
  int q2 = half(t[1] + t[2] + t[4] + t[5]);
  int q3 = half(t[2] + t[0] + t[5] + t[3]);
  int z_min = std::max({s1, s2, s3, s4});
  int z_max = std::min({q1, q2, q3});
  long double sum = 0.0L;
  for (int z = z_min; z <= z_max; ++z) {
    long double term = fact(z + 1) /
                       (fact(z - s1) * fact(z - s2) * fact(z - s3) * fact(z - s4) * fact(q1 - z) *
                        fact(q2 - z) * fact(q3 - z));
    sum += ((z % 2) ? -1.0L : 1.0L) * term;
  }
  return static_cast<double>(pre * sum);
}

double clebsch_gordan_factor(double F, double mF, int q, double Fp) {
  if (q < -1 || q > 1) throw DomainError("clebsch_gordan_factor: q must be in {-1, 0, +1}");
  double mFp = mF + q;
  if (std::abs(mFp) > Fp + 1e-9) return 0.0;
  double tj = wigner3j(Fp, 1.0, F, -mFp, static_cast<double>(q), mF);
  int phase_exp = static_cast<int>(std::lround(Fp - 1 + mF));
  double sign = (((phase_exp % 2) + 2) % 2) ? -1.0 : 1.0;
  return sign * std::sqrt(2 * F + 1) * tj;
}

double hyperfine_strength(double J, double Jp, double I, double F, double Fp) {
  double sj = wigner6j(J, Jp, 1.0, Fp, F, I);
  return (2 * Fp + 1) * (2 * J + 1) * sj * sj;
}

}  // namespace slf::atoms
