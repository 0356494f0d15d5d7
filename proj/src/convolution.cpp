#include "lhy/convolution.hpp"

#include <fftw3.h>

#include <complex>
#include <mutex>

#include "lhy/common.hpp"

namespace lhy {

namespace {
std::mutex g_plan_mutex;
}

std::vector<double> cube_convolution_fft(int M, const CubeFunction& A, const CubeFunction& B) {
  if (M < 0) throw ConfigError("cube half-width must be non-negative");
  // A spans [-2M, 2M], B spans [-M, M]; a period of 6M + 1 avoids wrap-around
  const int S = 6 * M + 2;
  const int Sc = S / 2 + 1;
  const std::size_t real_size = static_cast<std::size_t>(S) * S * S;
  const std::size_t cplx_size = static_cast<std::size_t>(S) * S * Sc;
  std::vector<double> a(real_size, 0.0), b(real_size, 0.0);
  auto wrap = [S](int k) { return k < 0 ? k + S : k; };
  auto at = [&](int i, int j, int k) {
    return (static_cast<std::size_t>(wrap(i)) * S + wrap(j)) * S + wrap(k);
  };
  for (int i = -2 * M; i <= 2 * M; ++i)
    for (int j = -2 * M; j <= 2 * M; ++j)
      for (int k = -2 * M; k <= 2 * M; ++k) a[at(i, j, k)] = A(i, j, k);
  for (int i = -M; i <= M; ++i)
    for (int j = -M; j <= M; ++j)
      for (int k = -M; k <= M; ++k) b[at(i, j, k)] = B(i, j, k);

  auto* fa = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * cplx_size));
  auto* fb = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * cplx_size));
  fftw_plan pa, pb, back;
  {
    std::lock_guard lock(g_plan_mutex);
    pa = fftw_plan_dft_r2c_3d(S, S, S, a.data(), fa, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_3d(S, S, S, b.data(), fb, FFTW_ESTIMATE);
    back = fftw_plan_dft_c2r_3d(S, S, S, fa, a.data(), FFTW_ESTIMATE);
  }
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t i = 0; i < cplx_size; ++i) {
    const std::complex<double> z = std::complex<double>(fa[i][0], fa[i][1]) * std::complex<double>(fb[i][0], fb[i][1]);
    fa[i][0] = z.real();
    fa[i][1] = z.imag();
  }
  fftw_execute(back);
  {
    std::lock_guard lock(g_plan_mutex);
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(back);
  }
  fftw_free(fa);
  fftw_free(fb);

  const int W = 2 * M + 1;
  std::vector<double> out(static_cast<std::size_t>(W) * W * W);
  const double norm = 1.0 / static_cast<double>(real_size);
  for (int i = -M; i <= M; ++i)
    for (int j = -M; j <= M; ++j)
      for (int k = -M; k <= M; ++k)
        out[(static_cast<std::size_t>(i + M) * W + (j + M)) * W + (k + M)] = a[at(i, j, k)] * norm;
  return out;
}

std::vector<double> cube_convolution_direct(int M, const CubeFunction& A, const CubeFunction& B) {
  const int W = 2 * M + 1;
  std::vector<double> bv(static_cast<std::size_t>(W) * W * W);
  for (int i = -M; i <= M; ++i)
    for (int j = -M; j <= M; ++j)
      for (int k = -M; k <= M; ++k) bv[(static_cast<std::size_t>(i + M) * W + (j + M)) * W + (k + M)] = B(i, j, k);
  // A on the difference cube, cached
  const int D = 4 * M + 1;
  std::vector<double> av(static_cast<std::size_t>(D) * D * D);
  for (int i = -2 * M; i <= 2 * M; ++i)
    for (int j = -2 * M; j <= 2 * M; ++j)
      for (int k = -2 * M; k <= 2 * M; ++k)
        av[(static_cast<std::size_t>(i + 2 * M) * D + (j + 2 * M)) * D + (k + 2 * M)] = A(i, j, k);
  std::vector<double> out(bv.size());
  for (int p1 = -M; p1 <= M; ++p1)
    for (int p2 = -M; p2 <= M; ++p2)
      for (int p3 = -M; p3 <= M; ++p3) {
        CompensatedSum s;
        for (int q1 = -M; q1 <= M; ++q1)
          for (int q2 = -M; q2 <= M; ++q2)
            for (int q3 = -M; q3 <= M; ++q3) {
              const double bq = bv[(static_cast<std::size_t>(q1 + M) * W + (q2 + M)) * W + (q3 + M)];
              const double ad = av[(static_cast<std::size_t>(p1 - q1 + 2 * M) * D + (p2 - q2 + 2 * M)) * D +
                                   (p3 - q3 + 2 * M)];
              s.add(ad * bq);
            }
        out[(static_cast<std::size_t>(p1 + M) * W + (p2 + M)) * W + (p3 + M)] = s.value();
      }
  return out;
}

}  // namespace lhy
