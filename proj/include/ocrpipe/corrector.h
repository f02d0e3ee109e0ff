// Copyright 2026 The ocrpipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Line-level post-correction: a noisy-channel beam decoder over a channel
// model and a character LM, and an external-process corrector speaking a
// line-in / line-out protocol.

#ifndef OCRPIPE_CORRECTOR_H_
#define OCRPIPE_CORRECTOR_H_

#include <string>
#include <vector>

#include "ocrpipe/channel_model.h"
#include "ocrpipe/char_lm.h"
#include "ocrpipe/document.h"

namespace ocrpipe {

struct BeamConfig {
  size_t beam_width = 8;
  double channel_weight = 1.0;  // lambda
  int max_insertions = 1;       // dropped characters restored per position

  void Validate() const;
};

struct DecodeResult {
  std::string text;
  // log P_lm(text) + lambda * log P_channel(observed | text), Viterbi
  // alignment. -inf when no candidate has positive probability.
  double score = 0.0;
};

// Beam search over intended strings. Per observed character the decoder may
// keep it, replace it by an intended character it was confused with in
// training, or drop it as spurious (if seen spurious in training); before
// each position it may restore up to max_insertions characters that training
// saw deleted. Ties go to the lexicographically smaller string. The result
// is the best over beam widths 1..beam_width, so widening never lowers it.
DecodeResult DecodeLine(const std::string& line, const ChannelModel& channel, const CharLm& lm,
                        const BeamConfig& config = {});

std::string CorrectLine(const std::string& line, const ChannelModel& channel, const CharLm& lm,
                        const BeamConfig& config = {});

// Runs `argv` (argv[0] looked up on PATH), writes each line plus '\n' to its
// stdin, closes it, and expects exactly lines.size() lines back on stdout.
// Throws ProcessFailure on spawn failure or nonzero exit (stderr included in
// the message) and ProtocolError on a line-count mismatch.
std::vector<std::string> CorrectExternal(const std::vector<std::string>& lines,
                                         const std::vector<std::string>& argv);

// Document drivers. A line whose correction keeps its token count retains
// token boxes and labels; otherwise its tokens are rebuilt from the text.
Document CorrectDocument(const Document& doc, const ChannelModel& channel, const CharLm& lm,
                         const BeamConfig& config = {});
Document CorrectDocumentExternal(const Document& doc, const std::vector<std::string>& argv);
// Shared by both drivers: replaces each line's text with corrected[i], in
// document order.
Document ApplyCorrections(const Document& doc, const std::vector<std::string>& corrected);

}  // namespace ocrpipe

#endif  // OCRPIPE_CORRECTOR_H_
