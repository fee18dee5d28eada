// Copyright 2026 The Lombard Flavor Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "support/reference_stoi.h"

#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>

namespace lombard::testing {
namespace {

constexpr int kN = 256;       // frame
constexpr int kHop = 128;
constexpr int kNfft = 512;
constexpr int kBands = 15;
constexpr int kSeg = 30;
constexpr double kFs = 10000.0;
constexpr double kBeta = -15.0;
constexpr double kRange = 40.0;
constexpr double kEps = DBL_EPSILON;

using Matrix = std::vector<std::vector<double>>;

std::vector<double> Window() {
  // Symmetric Hann of length N + 2 without its zero end points.
  std::vector<double> w(kN);
  for (int i = 0; i < kN; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (i + 1) / (kN + 1));
  }
  return w;
}

Matrix Frames(const std::vector<double>& x) {
  const std::vector<double> w = Window();
  Matrix frames;
  for (int start = 0; start + kN < static_cast<int>(x.size()); start += kHop) {
    std::vector<double> f(kN);
    for (int i = 0; i < kN; ++i) f[i] = w[i] * x[start + i];
    frames.push_back(f);
  }
  return frames;
}

std::vector<double> OverlapAdd(const Matrix& frames) {
  if (frames.empty()) return {};
  std::vector<double> out((frames.size() - 1) * kHop + kN, 0.0);
  for (size_t f = 0; f < frames.size(); ++f) {
    for (int i = 0; i < kN; ++i) out[f * kHop + i] += frames[f][i];
  }
  return out;
}

double Norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// |DFT|^2 of each windowed frame, bins 0..nfft/2.
Matrix PowerSpectra(const std::vector<double>& x) {
  const std::vector<double> w = Window();
  Matrix out;
  for (int start = 0; start + kN < static_cast<int>(x.size()); start += kHop) {
    std::vector<double> p(kNfft / 2 + 1);
    for (int k = 0; k <= kNfft / 2; ++k) {
      double re = 0.0, im = 0.0;
      for (int n = 0; n < kN; ++n) {
        const double v = w[n] * x[start + n];
        const double a = 2.0 * std::numbers::pi * k * n / kNfft;
        re += v * std::cos(a);
        im -= v * std::sin(a);
      }
      p[k] = re * re + im * im;
    }
    out.push_back(p);
  }
  return out;
}

// Band envelopes, [band][frame].
Matrix Bands(const Matrix& spectra) {
  const int bins = kNfft / 2 + 1;
  auto nearest = [&](double hz) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int b = 0; b < bins; ++b) {
      const double d = std::fabs(b * kFs / kNfft - hz);
      if (d < best_d) {
        best_d = d;
        best = b;
      }
    }
    return best;
  };
  Matrix out(kBands, std::vector<double>(spectra.size()));
  for (int j = 0; j < kBands; ++j) {
    const int lo = nearest(150.0 * std::pow(2.0, (2.0 * j - 1.0) / 6.0));
    const int hi = nearest(150.0 * std::pow(2.0, (2.0 * j + 1.0) / 6.0));
    for (size_t m = 0; m < spectra.size(); ++m) {
      double s = 0.0;
      for (int b = lo; b < hi; ++b) s += spectra[m][b];
      out[j][m] = std::sqrt(s);
    }
  }
  return out;
}

}  // namespace

double ReferenceStoi(const std::vector<double>& clean,
                     const std::vector<double>& degraded) {
  Matrix xf = Frames(clean);
  Matrix yf = Frames(degraded);
  std::vector<double> energy(xf.size());
  double top = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < xf.size(); ++i) {
    energy[i] = 20.0 * std::log10(Norm(xf[i]) + kEps);
    top = std::max(top, energy[i]);
  }
  Matrix xk, yk;
  for (size_t i = 0; i < xf.size(); ++i) {
    if (top - kRange - energy[i] < 0.0) {
      xk.push_back(xf[i]);
      yk.push_back(yf[i]);
    }
  }
  const std::vector<double> x = OverlapAdd(xk);
  const std::vector<double> y = OverlapAdd(yk);

  const Matrix X = Bands(PowerSpectra(x));
  const Matrix Y = Bands(PowerSpectra(y));
  const int frames = static_cast<int>(X[0].size());
  if (frames < kSeg) return std::numeric_limits<double>::quiet_NaN();

  const double clip = std::pow(10.0, -kBeta / 20.0);
  double total = 0.0;
  int count = 0;
  for (int m = kSeg; m <= frames; ++m) {
    for (int j = 0; j < kBands; ++j) {
      std::vector<double> xs(X[j].begin() + (m - kSeg), X[j].begin() + m);
      std::vector<double> ys(Y[j].begin() + (m - kSeg), Y[j].begin() + m);
      const double alpha = Norm(xs) / (Norm(ys) + kEps);
      for (int n = 0; n < kSeg; ++n) {
        ys[n] = std::min(ys[n] * alpha, xs[n] * (1.0 + clip));
      }
      double mx = 0.0, my = 0.0;
      for (int n = 0; n < kSeg; ++n) {
        mx += xs[n] / kSeg;
        my += ys[n] / kSeg;
      }
      for (int n = 0; n < kSeg; ++n) {
        xs[n] -= mx;
        ys[n] -= my;
      }
      const double nx = Norm(xs) + kEps, ny = Norm(ys) + kEps;
      double dot = 0.0;
      for (int n = 0; n < kSeg; ++n) dot += (xs[n] / nx) * (ys[n] / ny);
      total += dot;
      ++count;
    }
  }
  return total / count;
}

}  // namespace lombard::testing
