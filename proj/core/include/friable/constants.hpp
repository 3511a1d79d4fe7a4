#pragma once

namespace friable {

// Implicit constants of the asymptotic statements being tested. None of them
// is determined by the theory; they are configuration values, and every
// report echoes the ones it used.
struct Constants {
  // |alpha - (1 - log(u log(u+1)) / log y)| <= alpha_main_term / log y.
  double alpha_main_term = 2.0;
  // Near-one branch of the truncated Euler product envelope:
  // lower * log y <= zeta(sigma, y) <= upper * log y. The upper constant has
  // to absorb exp(gamma + Ein(4)) ~ 8.4e7 at sigma = 1 - 4/log y.
  double envelope_lower = 0.5;
  double envelope_upper = 2.0e8;
  // O()-constant of the small-sigma branch's relative error in the exponent.
  double envelope_error = 2.0;
  // Regime exponents: y' <= (log x)^k_prime, q <= (log x)^k_modulus.
  double k_prime = 1.0;
  double k_modulus = 2.0;
  // Implied constant of counting upper bounds (short intervals, progressions).
  double count_bound = 4.0;
  // Weyl sum decay exponent c in Q^(-c + 2(1 - alpha)) (log x)^5.
  double weyl_decay = 0.05;
  // Strong recurrence certification: ||q theta|| <= C eps delta^-kappa / N^k.
  double recurrence_scale = 10.0;
  double recurrence_kappa = 3.0;
  // Bootstrapping disjunction: eps' >= small * delta / Delta, or
  // |theta| <= large * Delta * eps' / (delta N^k).
  double bootstrap_small = 0.125;
  double bootstrap_large = 8.0;
};

}  // namespace friable
