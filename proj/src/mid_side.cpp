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

#include "mushra/mid_side.hpp"

#include <stdexcept>

namespace mushra::audio {

MidSidePair ms_forward(const AudioBuffer& stereo, double gain) {
  stereo.validate();
  if (stereo.num_channels() != 2) {
    throw std::invalid_argument("mid/side transform needs a 2-channel input");
  }
  if (!(gain > 0.0)) throw std::invalid_argument("mid/side gain must be positive");
  const auto l = stereo.channel(0);
  const auto r = stereo.channel(1);
  std::vector<double> mid(l.size()), side(l.size());
  for (std::size_t n = 0; n < l.size(); ++n) {
    mid[n] = (l[n] + r[n]) * gain;
    side[n] = (l[n] - r[n]) * gain;
  }
  return {AudioBuffer::mono(stereo.sample_rate, std::move(mid)),
          AudioBuffer::mono(stereo.sample_rate, std::move(side)), gain};
}

AudioBuffer ms_inverse(const MidSidePair& pair) {
  if (pair.mid.num_channels() != 1 || pair.side.num_channels() != 1) {
    throw std::invalid_argument("mid and side must be single-channel");
  }
  if (pair.mid.num_frames() != pair.side.num_frames() ||
      pair.mid.sample_rate != pair.side.sample_rate) {
    throw std::invalid_argument("mid and side differ in length or sample rate");
  }
  const double inv = 1.0 / (2.0 * pair.gain);
  const auto m = pair.mid.channel(0);
  const auto s = pair.side.channel(0);
  std::vector<double> l(m.size()), r(m.size());
  for (std::size_t n = 0; n < m.size(); ++n) {
    l[n] = (m[n] + s[n]) * inv;
    r[n] = (m[n] - s[n]) * inv;
  }
  return AudioBuffer::stereo(pair.mid.sample_rate, std::move(l), std::move(r));
}

}  // namespace mushra::audio
