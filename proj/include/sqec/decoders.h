// Copyright 2026 The sqec Authors
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

#ifndef SQEC_DECODERS_H
#define SQEC_DECODERS_H

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "sqec/sampler.h"

namespace sqec {

/// Maximum-weight matching on a general graph. Returns mate[v] or -1.
/// With max_cardinality the result has maximum cardinality and, among those,
/// maximum weight.
std::vector<long> max_weight_matching(size_t n, const std::vector<std::tuple<size_t, size_t, int64_t>> &edges,
                                      bool max_cardinality);

/// True when every fault flips at most two detectors.
bool is_matchable(const DetectorErrorModel &dem);

/// Splits faults with more than two detectors into components that already
/// appear as faults with at most two detectors; the fault probability is
/// merged into each component. Throws when no consistent split exists.
DetectorErrorModel decompose_graphlike(const DetectorErrorModel &dem);

class Decoder {
   public:
    virtual ~Decoder() = default;
    /// Predicted observable flips for a syndrome.
    virtual BitVector decode(const BitVector &syndrome) const = 0;
};

class MwpmDecoder : public Decoder {
   public:
    /// Requires a matchable model with at most 64 observables.
    explicit MwpmDecoder(const DetectorErrorModel &dem);
    BitVector decode(const BitVector &syndrome) const override;
    /// Total weight of the chosen matching.
    double matching_weight(const BitVector &syndrome) const;

   private:
    struct Edge {
        uint32_t to;
        double w;
        uint64_t obs;
    };
    struct Row {
        std::vector<double> dist;
        std::vector<uint64_t> obs;
    };
    Row shortest_paths(uint32_t src) const;
    std::pair<uint64_t, double> solve(const BitVector &syndrome) const;

    size_t n_det_;
    size_t n_obs_;
    std::vector<std::vector<Edge>> adj_;
    std::vector<Row> rows_;
};

BitVector mwpm_decode(const DetectorErrorModel &dem, const BitVector &syndrome);

struct BpOsdResult {
    BitVector errors;
    bool bp_converged = false;
    bool satisfiable = true;
    size_t iterations = 0;
};

struct BpOsdOptions {
    size_t max_iterations = 32;
    double scaling = 0.625;
    double clip = 30.0;
};

class BpOsdDecoder : public Decoder {
   public:
    BpOsdDecoder(const BitMatrix &h, const std::vector<double> &priors, const BpOsdOptions &opts = {});
    explicit BpOsdDecoder(const DetectorErrorModel &dem, const BpOsdOptions &opts = {});
    BpOsdResult solve(const BitVector &syndrome) const;
    BitVector decode(const BitVector &syndrome) const override;

   private:
    size_t rows_, cols_;
    std::vector<std::vector<uint32_t>> check_vars_;
    std::vector<std::vector<uint32_t>> var_checks_;
    std::vector<BitVector> columns_;
    std::vector<double> prior_llr_;
    std::vector<std::vector<uint32_t>> obs_of_fault_;
    size_t n_obs_ = 0;
    BpOsdOptions opts_;
};

BpOsdResult bposd_decode(const BitMatrix &h, const std::vector<double> &priors, const BitVector &syndrome,
                         const BpOsdOptions &opts = {});

class ExhaustiveDecoder : public Decoder {
   public:
    static constexpr size_t kMaxFaults = 22;
    explicit ExhaustiveDecoder(const DetectorErrorModel &dem);
    BitVector decode(const BitVector &syndrome) const override;
    /// Posterior weight of each observable class for a syndrome.
    std::vector<std::pair<uint64_t, double>> class_weights(const BitVector &syndrome) const;

   private:
    size_t n_det_, n_obs_;
    std::vector<uint64_t> det_, obs_;
    std::vector<double> log_ratio_;
    double log_base_ = 0;
};

BitVector exhaustive_decode(const DetectorErrorModel &dem, const BitVector &syndrome);

/// Number of shots whose predicted observable flips differ from the actual ones.
size_t count_failures(const Decoder &decoder, const SampleBatch &batch, size_t workers = 0);

}  // namespace sqec

#endif
