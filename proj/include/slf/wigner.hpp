#pragma once

namespace slf::atoms {

// Wigner 3j symbol by the Racah formula; arguments are (half-)integers.
// Returns 0 when the triangle or m-sum conditions fail.
// Throws DomainError on non-half-integer input or |m| > j.
double wigner3j(double j1, double j2, double j3, double m1, double m2, double m3);

// Wigner 6j symbol { j1 j2 j3 / j4 j5 j6 }; 0 outside triangle conditions.
double wigner6j(double j1, double j2, double j3, double j4, double j5, double j6);

// Transition coefficient C_{mF,q} = (-1)^(F'-1+mF) sqrt(2F+1) x
// 3j(F', 1, F; -(mF+q), q, mF), nonzero only for the physical selection rule
// mF' = mF + q. Throws DomainError for q outside {-1, 0, +1}.
double clebsch_gordan_factor(double F, double mF, int q, double Fp);

// Hyperfine line-strength share S_{F,F'} = (2F'+1)(2J+1) {J J' 1; F' F I}^2;
// shares sum to 1 over F' for fixed F.
double hyperfine_strength(double J, double Jp, double I, double F, double Fp);

}  // namespace slf::atoms
