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

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "ocrpipe/corrector.h"
#include "ocrpipe/error.h"
#include "ocrpipe/text.h"

namespace ocrpipe {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Hypothesis {
  std::u32string text;
  double score = 0.0;
};

bool Better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.text < b.text;
}

class Decoder {
 public:
  Decoder(const ChannelModel& channel, const CharLm& lm, const BeamConfig& config)
      : channel_(channel), lm_(lm), config_(config) {
    log_close_ = Channel(1.0 - channel_.InsertionRate());
  }

  DecodeResult Run(const std::u32string& observed) {
    std::vector<Hypothesis> beam{{U"", 0.0}};
    for (size_t i = 0; i <= observed.size(); ++i) {
      beam = RestoreDropped(std::move(beam));
      if (i == observed.size()) break;
      beam = Consume(beam, observed[i]);
    }
    for (Hypothesis& h : beam) {
      h.score += lm_.LogProb(lm_.ContextOf(h.text), CharLm::kEos) + log_close_;
    }
    const Hypothesis& best = *std::min_element(beam.begin(), beam.end(), Better);
    return {FromCodePoints(best.text), best.score};
  }

 private:
  // lambda * log p, with lambda = 0 switching the channel off entirely.
  double Channel(double p) const {
    if (config_.channel_weight == 0.0) return 0.0;
    return p > 0 ? config_.channel_weight * std::log(p) : kNegInf;
  }

  void Extend(const Hypothesis& h, char32_t intended, double channel_score,
              std::vector<Hypothesis>* out) const {
    if (channel_score == kNegInf) return;
    Hypothesis next{h.text, h.score};
    next.score += lm_.LogProb(lm_.ContextOf(h.text), intended) + channel_score;
    next.text.push_back(intended);
    out->push_back(std::move(next));
  }

  std::vector<Hypothesis> RestoreDropped(std::vector<Hypothesis> beam) const {
    const auto& dropped = channel_.DeletedChars();
    if (dropped.empty() || config_.max_insertions <= 0) return beam;
    std::vector<Hypothesis> all = beam;
    std::vector<Hypothesis> frontier = std::move(beam);
    for (int round = 0; round < config_.max_insertions && !frontier.empty(); ++round) {
      std::vector<Hypothesis> next;
      for (const Hypothesis& h : frontier) {
        for (char32_t c : dropped) Extend(h, c, log_close_ + Channel(channel_.DeleteProb(c)), &next);
      }
      all.insert(all.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
    return Prune(std::move(all));
  }

  std::vector<Hypothesis> Consume(const std::vector<Hypothesis>& beam, char32_t observed) const {
    std::vector<Hypothesis> next;
    const double keep = log_close_ + Channel(channel_.NoEditProb(observed));
    const double spurious = channel_.SeenInserted(observed)
                                ? Channel(channel_.InsertionRate() *
                                          channel_.InsertedCharProb(observed))
                                : kNegInf;
    for (const Hypothesis& h : beam) {
      Extend(h, observed, keep, &next);
      for (char32_t intended : channel_.IntendedFor(observed)) {
        Extend(h, intended, log_close_ + Channel(channel_.SubstituteProb(observed, intended)),
               &next);
      }
      if (spurious != kNegInf) next.push_back({h.text, h.score + spurious});
    }
    return Prune(std::move(next));
  }

  // Recombine identical prefixes (same future) keeping the best score, then
  // keep the top beam_width.
  std::vector<Hypothesis> Prune(std::vector<Hypothesis> hyps) const {
    std::unordered_map<std::u32string, size_t> seen;
    std::vector<Hypothesis> unique;
    unique.reserve(hyps.size());
    for (Hypothesis& h : hyps) {
      auto [it, inserted] = seen.emplace(h.text, unique.size());
      if (inserted) {
        unique.push_back(std::move(h));
      } else if (h.score > unique[it->second].score) {
        unique[it->second].score = h.score;
      }
    }
    const size_t keep = std::min(unique.size(), config_.beam_width);
    std::partial_sort(unique.begin(), unique.begin() + static_cast<std::ptrdiff_t>(keep),
                      unique.end(), Better);
    unique.resize(keep);
    return unique;
  }

  const ChannelModel& channel_;
  const CharLm& lm_;
  const BeamConfig& config_;
  double log_close_ = 0.0;
};

}  // namespace

void BeamConfig::Validate() const {
  if (beam_width < 1) throw InvalidArgument("beam width must be >= 1");
  if (!(channel_weight >= 0)) throw InvalidArgument("channel weight must be >= 0");
  if (max_insertions < 0) throw InvalidArgument("max insertions must be >= 0");
}

DecodeResult DecodeLine(const std::string& line, const ChannelModel& channel, const CharLm& lm,
                        const BeamConfig& config) {
  config.Validate();
  const std::u32string observed = ToCodePoints(Nfc(line));
  if (observed.empty()) return {"", 0.0};
  // Pruning can lose a path at width w that a narrower beam kept, so report
  // the best over every width up to the configured one. This makes the
  // achieved score monotone in the width.
  DecodeResult best{"", kNegInf};
  bool have = false;
  for (size_t w = 1; w <= config.beam_width; ++w) {
    BeamConfig narrow = config;
    narrow.beam_width = w;
    DecodeResult r = Decoder(channel, lm, narrow).Run(observed);
    if (!have || r.score > best.score || (r.score == best.score && r.text < best.text)) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

std::string CorrectLine(const std::string& line, const ChannelModel& channel, const CharLm& lm,
                        const BeamConfig& config) {
  return DecodeLine(line, channel, lm, config).text;
}

}  // namespace ocrpipe
