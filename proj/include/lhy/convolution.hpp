#pragma once

#include <functional>
#include <vector>

namespace lhy {

// Lattice function on integer triples (momentum p = 2 pi k).
using CubeFunction = std::function<double(int, int, int)>;

// C(p) = sum_{q in cube} A(p - q) B(q) for p, q in the cube |k_i| <= M.
// Results are indexed ((a + M) S + (b + M)) S + (c + M), S = 2M + 1.
std::vector<double> cube_convolution_fft(int M, const CubeFunction& A, const CubeFunction& B);
std::vector<double> cube_convolution_direct(int M, const CubeFunction& A, const CubeFunction& B);

}  // namespace lhy
