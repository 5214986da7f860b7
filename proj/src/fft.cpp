// Copyright 2026 The mushra-stereo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mushra/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace mushra::audio {
namespace {

struct Plans {
  fftw_plan forward;
  fftw_plan inverse;
};

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (ptr == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Plans live for the whole process.
Plans plans_for(std::size_t n) {
  static std::map<std::size_t, Plans> cache;
  std::lock_guard lock(planner_mutex());
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  FftwBuffer real(sizeof(double) * n);
  FftwBuffer cplx(sizeof(fftw_complex) * (n / 2 + 1));
  const int size = static_cast<int>(n);
  Plans p{};
  p.forward = fftw_plan_dft_r2c_1d(size, static_cast<double*>(real.ptr),
                                   static_cast<fftw_complex*>(cplx.ptr),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.inverse = fftw_plan_dft_c2r_1d(size, static_cast<fftw_complex*>(cplx.ptr),
                                   static_cast<double*>(real.ptr),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (p.forward == nullptr || p.inverse == nullptr) {
    throw std::runtime_error("fftw planning failed");
  }
  cache.emplace(n, p);
  return p;
}

}  // namespace

RealFft::RealFft(std::size_t size) : size_(size) {
  if (size < 2) throw std::invalid_argument("fft size must be at least 2");
  const Plans p = plans_for(size);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != size_ || out.size() != num_bins()) {
    throw std::invalid_argument("fft buffer size mismatch");
  }
  FftwBuffer real(sizeof(double) * size_);
  std::copy(in.begin(), in.end(), static_cast<double*>(real.ptr));
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), static_cast<double*>(real.ptr),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != num_bins() || out.size() != size_) {
    throw std::invalid_argument("fft buffer size mismatch");
  }
  // c2r overwrites its input.
  FftwBuffer cplx(sizeof(fftw_complex) * num_bins());
  std::copy(in.begin(), in.end(), static_cast<std::complex<double>*>(cplx.ptr));
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       static_cast<fftw_complex*>(cplx.ptr), out.data());
}

}  // namespace mushra::audio
