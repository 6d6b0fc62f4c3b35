#ifndef QMA_SPECTRAL_HPP
#define QMA_SPECTRAL_HPP

#include <complex>
#include <vector>

#include "qma/grid.hpp"

// Fourier pseudospectral calculus on the unit torus.  Transforms use FFTW
// r2c/c2r with plans cached per grid shape; all derivative operators act by
// symbol multiplication on the half-complex spectrum.

namespace qma {

/// Half-complex (r2c) spectrum of a real field; coefficients are normalized
/// so that entry k is the Fourier coefficient of e^{2 pi i k.x}.
struct Spectrum {
  PeriodicGrid grid;
  std::vector<std::complex<double>> coeffs;
};

/// One signed Hessian entry in a linear combination sum coeff * d_r d_s.
struct HessTerm {
  double coeff;
  int r;
  int s;
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

/// Exact Fourier differentiation d_r d_s f; for r != s the Nyquist modes of
/// both axes are zeroed (odd-order factors).
ScalarField second_partial(const ScalarField& f, int r, int s);

/// sum_i coeff_i * d_{r_i} d_{s_i} f from a precomputed spectrum, in a single
/// inverse transform.
ScalarField hessian_combination(const Spectrum& s, const std::vector<HessTerm>& terms);

/// Full Laplacian.
ScalarField laplacian(const ScalarField& f);

/// Solves  Laplacian u = f  on the mean-zero subspace (the zero mode of f is
/// discarded); returns mean-zero u.
ScalarField inverse_laplacian_mean_zero(const ScalarField& f);

/// Mean of f^2 evaluated from the spectral coefficients (Parseval).
double parseval_mean_square(const Spectrum& s);

/// Caps FFTW internal parallelism: n threads, 0 = auto.  Reads QMA_THREADS on
/// first use if never called (unset = serial).
void set_threads(int n);

} // namespace qma

#endif
