#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "catodyne/states.hpp"

using namespace catodyne;

TEST(CatNorm, Examples) {
  EXPECT_DOUBLE_EQ(cat_norm(Parity::plus, 0.0), 2.0);
  EXPECT_NEAR(cat_norm(Parity::plus, 10.0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(cat_norm(Parity::minus, 10.0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(cat_norm(Parity::minus, 1.0), 1.3150397079657993, 1e-15);
  EXPECT_THROW(cat_norm(Parity::minus, 0.0), DegenerateCat);
  EXPECT_THROW(cat_norm(Parity::plus, -1.0), std::invalid_argument);
}

TEST(CatNorm, SmallMinusCatIsAccurate) {
  // 2(1 - e^{-2b^2}) ~ 4 b^2 for tiny b; naive subtraction loses every digit.
  EXPECT_NEAR(cat_norm(Parity::minus, 1e-9), 2e-9, 1e-22);
}

TEST(SignalState, Constructors) {
  EXPECT_TRUE(SignalState::vacuum().is<Vacuum>());
  EXPECT_EQ(SignalState::fock(3).as<Fock>().kappa, 3);
  EXPECT_THROW(SignalState::fock(-1), std::invalid_argument);
  EXPECT_THROW(SignalState::custom({1.0, 1.0}), std::invalid_argument);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NO_THROW(SignalState::custom({h, 0.0, h}));
  EXPECT_DOUBLE_EQ(SignalState::coherent({0.6, 0.8}).mean_photon_number(), 1.0);
  EXPECT_DOUBLE_EQ(SignalState::custom({h, 0.0, h}).mean_photon_number(), 1.0);
}

TEST(SignalState, DefiniteParity) {
  EXPECT_EQ(SignalState::vacuum().definite_parity(), Parity::plus);
  EXPECT_EQ(SignalState::fock(3).definite_parity(), Parity::minus);
  EXPECT_EQ(SignalState::fock(2).definite_parity(), Parity::plus);
  EXPECT_FALSE(SignalState::coherent(0.8).definite_parity().has_value());
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_EQ(SignalState::custom({0.0, h, 0.0, h}).definite_parity(), Parity::minus);
  EXPECT_FALSE(SignalState::custom({h, h}).definite_parity().has_value());
}

TEST(LocalOscillator, Basics) {
  const auto lo = LocalOscillatorSpec::cat(Parity::minus, 2.0, M_PI / 2);
  EXPECT_TRUE(lo.is_cat());
  EXPECT_EQ(lo.parity(), Parity::minus);
  EXPECT_NEAR(lo.beta().imag(), 2.0, 1e-15);
  EXPECT_FALSE(LocalOscillatorSpec::mixed(2.0).is_cat());
  EXPECT_EQ(to_string(LoKind::cat_plus), "cat+");
  EXPECT_EQ(to_string(LoKind::mixed), "mixed");
}

TEST(ToFock, Vacuum) {
  const auto v = to_fock(SignalState::vacuum(), 4);
  ASSERT_EQ(v.coeffs.size(), 5u);
  EXPECT_EQ(v.coeffs[0], std::complex<double>(1.0));
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(v.coeffs[k], std::complex<double>(0.0));
  EXPECT_EQ(v.tail_bound, 0.0);
}

TEST(ToFock, MinusCatHasOnlyOddTerms) {
  const auto v = to_fock(LocalOscillatorSpec::cat(Parity::minus, 1.0), 5, 1.0);
  for (int k = 0; k <= 5; k += 2) EXPECT_EQ(v.coeffs[k], std::complex<double>(0.0)) << k;
  for (int k = 1; k <= 5; k += 2) EXPECT_NE(v.coeffs[k], std::complex<double>(0.0)) << k;
}

TEST(ToFock, CoherentPoissonWeight) {
  const auto v = to_fock(SignalState::coherent(1.0), 30);
  EXPECT_NEAR(std::norm(v.coeffs[1]), std::exp(-1.0), 1e-16);
  EXPECT_NEAR(v.norm2() + v.tail_bound, 1.0, 1e-15);
}

TEST(ToFock, CoherentPhase) {
  const std::complex<double> alpha = std::polar(1.3, 0.7);
  const auto v = to_fock(SignalState::coherent(alpha), 40);
  for (int k = 1; k < 10; ++k) {
    const auto ratio = v.coeffs[k] / v.coeffs[k - 1];
    EXPECT_NEAR(std::abs(ratio - alpha / std::sqrt(double(k))), 0.0, 1e-14) << k;
  }
}

TEST(ToFock, TruncationError) {
  EXPECT_THROW(to_fock(SignalState::coherent(5.0), 20), TruncationError);
  try {
    to_fock(SignalState::coherent(5.0), 20);
  } catch (const TruncationError& e) {
    EXPECT_GT(e.bound(), 1e-12);
  }
  EXPECT_THROW(to_fock(SignalState::fock(6), 5), TruncationError);
  EXPECT_THROW(to_fock(LocalOscillatorSpec::mixed(1.0), 20), std::invalid_argument);
}

TEST(ToFock, CatNormalization) {
  for (Parity p : {Parity::plus, Parity::minus})
    for (double b : {0.3, 1.0, 2.5, 5.0}) {
      const auto lo = LocalOscillatorSpec::cat(p, b);
      const int n = choose_cutoff(lo, SignalState::vacuum());
      const auto v = to_fock(lo, n);
      EXPECT_GE(v.norm2(), 1.0 - 1e-12);
      EXPECT_LE(v.norm2(), 1.0 + 1e-12);
      EXPECT_GE(v.tail_bound, 0.0);
    }
}

TEST(ToFock, ParityBitExact) {
  for (double b : {0.5, 1.7, 4.0}) {
    const auto plus = to_fock(LocalOscillatorSpec::cat(Parity::plus, b), 80);
    const auto minus = to_fock(LocalOscillatorSpec::cat(Parity::minus, b), 80);
    for (int k = 0; k <= 80; ++k) {
      if (k % 2) {
        EXPECT_EQ(plus.coeffs[k], std::complex<double>(0.0));
      } else {
        EXPECT_EQ(minus.coeffs[k], std::complex<double>(0.0));
      }
    }
  }
}

TEST(ToFock, CoherentSelfOverlap) {
  for (double a : {0.2, 1.6, 3.0}) {
    const auto sig = SignalState::coherent(std::polar(a, 1.1));
    const int n = choose_cutoff(LocalOscillatorSpec::coherent(0.0), sig);
    const auto v = to_fock(sig, n);
    std::complex<double> ov = 0.0;
    for (const auto& c : v.coeffs) ov += std::conj(c) * c;
    EXPECT_NEAR(ov.real(), 1.0, 1e-12);
  }
}

TEST(ChooseCutoff, Floor) {
  EXPECT_GE(choose_cutoff(LocalOscillatorSpec::coherent(0.0), SignalState::vacuum(), 1e-12), 10);
}

TEST(ChooseCutoff, CoherentFiveMatchesPoissonTail) {
  const int n = choose_cutoff(LocalOscillatorSpec::coherent(5.0), SignalState::vacuum(), 1e-12);
  // Floor is 25 + 50 + 10 = 85; Poisson(25) needs about 67 for 1e-12.
  EXPECT_EQ(n, 85);
  EXPECT_LT(detail::poisson_upper_tail(n, 25.0), 1e-12);
}

TEST(ChooseCutoff, SmallestAboveFloor) {
  // With a large signal the tail criterion, not the floor, decides.
  const auto lo = LocalOscillatorSpec::coherent(1.0);
  const auto sig = SignalState::coherent(6.0);
  const int n = choose_cutoff(lo, sig, 1e-12);
  // Total photon number of two coherent states is Poisson(1 + 36).
  EXPECT_LT(detail::poisson_upper_tail(n, 37.0), 1e-12);
  EXPECT_GE(detail::poisson_upper_tail(n - 1, 37.0), 1e-12);
  EXPECT_NEAR(total_photon_tail(lo, sig, n), detail::poisson_upper_tail(n, 37.0), 1e-25);
}

TEST(ChooseCutoff, CatWithFock) {
  const auto lo = LocalOscillatorSpec::cat(Parity::plus, 2.0);
  const auto sig = SignalState::fock(3);
  const int n = choose_cutoff(lo, sig, 1e-12);
  int poisson_cut = 0;
  while (detail::poisson_upper_tail(poisson_cut, 4.0) >= 1e-12) ++poisson_cut;
  EXPECT_GE(n, 3 + poisson_cut - 1);
  EXPECT_LT(total_photon_tail(lo, sig, n), 1e-12);
}

TEST(PoissonTail, AgainstDirectSum) {
  for (double mean : {0.5, 4.0, 25.0}) {
    for (int n : {0, 3, 10, 40}) {
      double head = 0.0;
      for (int k = 0; k <= n; ++k) head += poisson_pmf(k, mean);
      const double tail = detail::poisson_upper_tail(n, mean);
      EXPECT_NEAR(head + tail, 1.0, 1e-14) << mean << " " << n;
    }
  }
}

TEST(NumberDistribution, CatMatchesVector) {
  const auto lo = LocalOscillatorSpec::cat(Parity::plus, 1.5, 0.4);
  const auto v = to_fock(lo, 60);
  const auto p = number_distribution(lo, 61);
  for (int k = 0; k <= 60; ++k) EXPECT_NEAR(p[k], std::norm(v.coeffs[k]), 1e-16) << k;
}
