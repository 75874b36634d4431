#pragma once
// Rapidly decreasing test functions (a Gaussian family closed under shift,
// modulation, product, and Fourier transform — all exact), plus the smooth
// dyadic resolution windows used by the Littlewood-Paley checks.
//
// Fourier convention throughout:  F[f](xi) = (2 pi)^(-n/2) Int f(x) e^(-i x.xi) dx.

#include <complex>
#include <span>
#include <vector>

namespace psflab::schwartz {

enum class DecayClass { gaussian, shifted_gaussian, modulated_gaussian };

// f(x) = amp * e^{i m.x} * exp(-|x - h|^2 / (2 a)),   a > 0.
// F[f](xi) = amp * e^{-i h.(xi - m)} * a^{n/2} * exp(-a |xi - m|^2 / 2).
class TestFunction {
public:
  int dim() const { return dim_; }
  double width() const { return a_; }
  std::span<const double> shift() const { return h_; }
  std::span<const double> modulation() const { return m_; }
  std::complex<double> amplitude() const { return amp_; }

  std::complex<double> value(std::span<const double> x) const;
  std::complex<double> fourier(std::span<const double> xi) const;
  std::complex<double> value(double x) const;    // dim 1 convenience
  std::complex<double> fourier(double xi) const;

  DecayClass decay_class() const;

  friend TestFunction gaussian(double a, int n);
  friend TestFunction shift_modulate(const TestFunction& f,
                                     std::span<const double> h,
                                     std::span<const double> m);
  friend TestFunction product(const TestFunction& f, const TestFunction& g);
  friend TestFunction fourier_transform(const TestFunction& f);
  friend TestFunction scale_amplitude(const TestFunction& f, std::complex<double> c);

private:
  TestFunction(int dim, double a, std::vector<double> h, std::vector<double> m,
               std::complex<double> amp);

  int dim_;
  double a_;
  std::vector<double> h_;
  std::vector<double> m_;
  std::complex<double> amp_;
};

// Centred unit-amplitude Gaussian of width a in dimension n.
// Throws std::invalid_argument unless a > 0, n >= 1.
TestFunction gaussian(double a, int n);

// g(x) = e^{i m.x} f(x - h). Composes exactly (the amplitude picks up the
// cross phase e^{-i m_old.h}).
TestFunction shift_modulate(const TestFunction& f, std::span<const double> h,
                            std::span<const double> m);

// Pointwise product; Gaussians are closed under it (exact).
TestFunction product(const TestFunction& f, const TestFunction& g);

// The Fourier transform as a member of the same family (exact).
TestFunction fourier_transform(const TestFunction& f);

TestFunction scale_amplitude(const TestFunction& f, std::complex<double> c);

// --- dyadic windows ---------------------------------------------------------
//
// smooth_step: C^inf, 0 for u <= 0, 1 for u >= 1, strictly increasing between.
// window_profile(r): 1 for r <= 1, 0 for r >= 3/2, C^inf radial profile.
// dyadic_window(j, x): phi_j(x) = phi_0(2^-j x) - phi_0(2^-(j-1) x) for j >= 1,
//                      phi_0(x) for j == 0.
// The partial sums telescope: sum_{j<=J} phi_j(x) = phi_0(2^-J x).

double smooth_step(double u);
double window_profile(double r);
double dyadic_window_radial(int j, double r);
double dyadic_window(int j, std::span<const double> x);
double window_partial_sum(int j_max, std::span<const double> x);

}  // namespace psflab::schwartz
