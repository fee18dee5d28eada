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

#ifndef LOMBARD_TESTS_SUPPORT_SYNTHETIC_SPEECH_H_
#define LOMBARD_TESTS_SUPPORT_SYNTHETIC_SPEECH_H_

#include <cstdint>
#include <vector>

#include "lombard/audio.h"

namespace lombard::testing {

// Voice of one synthetic talker.
struct Voice {
  double f0_hz = 120.0;
  // Multiplies every formant frequency.
  double formant_scale = 1.0;
  // Multiplies syllable and gap durations.
  double tempo = 1.0;
};

Voice VoiceForSpeaker(int speaker);

// Harmonic source with declining pitch, three formant resonators per
// syllable, fricative bursts and pauses. The syllable plan depends only on
// `sentence`, the voice on the talker, so different talkers say "the same
// sentence". Output peaks near 0.5.
AudioSignal SyntheticSentence(uint64_t sentence, const Voice& voice,
                              int sample_rate, double seconds = 2.0);

// Stationary Gaussian noise with a speech-like spectral tilt.
AudioSignal ShapedNoise(uint64_t seed, int sample_rate, double seconds);

AudioSignal WhiteNoise(uint64_t seed, int sample_rate, double seconds,
                       double rms = 0.1);

AudioSignal Sine(double frequency_hz, double amplitude, int sample_rate,
                 double seconds);

// x + noise scaled to the given plain-RMS SNR over the whole signal.
AudioSignal AddNoiseAtSnr(const AudioSignal& x, const AudioSignal& noise,
                          double snr_db);

}  // namespace lombard::testing

#endif  // LOMBARD_TESTS_SUPPORT_SYNTHETIC_SPEECH_H_
