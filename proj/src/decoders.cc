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

#include "sqec/decoders.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <thread>

namespace sqec {

// Edmonds' blossom algorithm with dual variables, O(n^3). Edge k has
// endpoints 2k and 2k+1; labels are 1 (S) and 2 (T).
namespace {

class Blossom {
   public:
    Blossom(size_t n, const std::vector<std::tuple<size_t, size_t, int64_t>> &edges, bool maxcard)
        : nv_(n), maxcard_(maxcard) {
        for (const auto &[i, j, w] : edges) {
            if (i >= n || j >= n || i == j) {
                throw std::invalid_argument("bad matching edge");
            }
            ei_.push_back((long)i);
            ej_.push_back((long)j);
            // Doubled weights keep every dual update integral.
            ew_.push_back(2 * w);
        }
        ne_ = ei_.size();
        int64_t maxw = 0;
        for (int64_t w : ew_) {
            maxw = std::max(maxw, w);
        }
        endpoint_.resize(2 * ne_);
        for (size_t p = 0; p < 2 * ne_; p++) {
            endpoint_[p] = p % 2 ? ej_[p / 2] : ei_[p / 2];
        }
        neighbend_.assign(nv_, {});
        for (size_t k = 0; k < ne_; k++) {
            neighbend_[(size_t)ei_[k]].push_back((long)(2 * k + 1));
            neighbend_[(size_t)ej_[k]].push_back((long)(2 * k));
        }
        mate_.assign(nv_, -1);
        label_.assign(2 * nv_, 0);
        labelend_.assign(2 * nv_, -1);
        inblossom_.resize(nv_);
        for (size_t v = 0; v < nv_; v++) {
            inblossom_[v] = (long)v;
        }
        blossomparent_.assign(2 * nv_, -1);
        blossomchilds_.assign(2 * nv_, {});
        blossombase_.assign(2 * nv_, -1);
        for (size_t v = 0; v < nv_; v++) {
            blossombase_[v] = (long)v;
        }
        blossomendps_.assign(2 * nv_, {});
        bestedge_.assign(2 * nv_, -1);
        blossombestedges_.assign(2 * nv_, {});
        has_bbe_.assign(2 * nv_, false);
        for (size_t b = nv_; b < 2 * nv_; b++) {
            unused_.push_back((long)b);
        }
        dual_.assign(2 * nv_, 0);
        for (size_t v = 0; v < nv_; v++) {
            dual_[v] = maxw;
        }
        allow_.assign(ne_, false);
    }

    std::vector<long> run() {
        if (ne_ == 0) {
            return std::vector<long>(nv_, -1);
        }
        for (size_t stage = 0; stage < nv_; stage++) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (size_t b = nv_; b < 2 * nv_; b++) {
                blossombestedges_[b].clear();
                has_bbe_[b] = false;
            }
            std::fill(allow_.begin(), allow_.end(), false);
            queue_.clear();
            for (size_t v = 0; v < nv_; v++) {
                if (mate_[v] == -1 && label_[(size_t)inblossom_[v]] == 0) {
                    assign_label((long)v, 1, -1);
                }
            }
            bool augmented = false;
            while (true) {
                while (!queue_.empty() && !augmented) {
                    long v = queue_.back();
                    queue_.pop_back();
                    for (long p : neighbend_[(size_t)v]) {
                        size_t k = (size_t)p / 2;
                        long w = endpoint_[(size_t)p];
                        if (inblossom_[(size_t)v] == inblossom_[(size_t)w]) {
                            continue;
                        }
                        int64_t kslack = 0;
                        if (!allow_[k]) {
                            kslack = slack(k);
                            if (kslack <= 0) {
                                allow_[k] = true;
                            }
                        }
                        if (allow_[k]) {
                            if (label_[(size_t)inblossom_[(size_t)w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[(size_t)inblossom_[(size_t)w]] == 1) {
                                long base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[(size_t)w] == 0) {
                                label_[(size_t)w] = 2;
                                labelend_[(size_t)w] = p ^ 1;
                            }
                        } else if (label_[(size_t)inblossom_[(size_t)w]] == 1) {
                            size_t b = (size_t)inblossom_[(size_t)v];
                            if (bestedge_[b] == -1 || kslack < slack((size_t)bestedge_[b])) {
                                bestedge_[b] = (long)k;
                            }
                        } else if (label_[(size_t)w] == 0) {
                            if (bestedge_[(size_t)w] == -1 || kslack < slack((size_t)bestedge_[(size_t)w])) {
                                bestedge_[(size_t)w] = (long)k;
                            }
                        }
                    }
                }
                if (augmented) {
                    break;
                }
                int deltatype = -1;
                int64_t delta = 0;
                long deltaedge = -1, deltablossom = -1;
                if (!maxcard_) {
                    deltatype = 1;
                    delta = *std::min_element(dual_.begin(), dual_.begin() + (long)nv_);
                }
                for (size_t v = 0; v < nv_; v++) {
                    if (label_[(size_t)inblossom_[v]] == 0 && bestedge_[v] != -1) {
                        int64_t d = slack((size_t)bestedge_[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (size_t b = 0; b < 2 * nv_; b++) {
                    if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                        int64_t d = slack((size_t)bestedge_[b]) / 2;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (size_t b = nv_; b < 2 * nv_; b++) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                        (deltatype == -1 || dual_[b] < delta)) {
                        delta = dual_[b];
                        deltatype = 4;
                        deltablossom = (long)b;
                    }
                }
                if (deltatype == -1) {
                    deltatype = 1;
                    delta = std::max<int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + (long)nv_));
                }
                for (size_t v = 0; v < nv_; v++) {
                    int l = label_[(size_t)inblossom_[v]];
                    if (l == 1) {
                        dual_[v] -= delta;
                    } else if (l == 2) {
                        dual_[v] += delta;
                    }
                }
                for (size_t b = nv_; b < 2 * nv_; b++) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                        if (label_[b] == 1) {
                            dual_[b] += delta;
                        } else if (label_[b] == 2) {
                            dual_[b] -= delta;
                        }
                    }
                }
                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allow_[(size_t)deltaedge] = true;
                    long i = ei_[(size_t)deltaedge], j = ej_[(size_t)deltaedge];
                    if (label_[(size_t)inblossom_[(size_t)i]] == 0) {
                        std::swap(i, j);
                    }
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allow_[(size_t)deltaedge] = true;
                    queue_.push_back(ei_[(size_t)deltaedge]);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented) {
                break;
            }
            for (size_t b = nv_; b < 2 * nv_; b++) {
                if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) {
                    expand_blossom((long)b, true);
                }
            }
        }
        std::vector<long> out(nv_, -1);
        for (size_t v = 0; v < nv_; v++) {
            if (mate_[v] >= 0) {
                out[v] = endpoint_[(size_t)mate_[v]];
            }
        }
        return out;
    }

   private:
    int64_t slack(size_t k) const {
        return dual_[(size_t)ei_[k]] + dual_[(size_t)ej_[k]] - 2 * ew_[k];
    }

    void leaves(long b, std::vector<long> &out) const {
        if ((size_t)b < nv_) {
            out.push_back(b);
            return;
        }
        for (long t : blossomchilds_[(size_t)b]) {
            leaves(t, out);
        }
    }
    std::vector<long> leaves(long b) const {
        std::vector<long> out;
        leaves(b, out);
        return out;
    }

    void assign_label(long w, int t, long p) {
        size_t b = (size_t)inblossom_[(size_t)w];
        label_[(size_t)w] = label_[b] = t;
        labelend_[(size_t)w] = labelend_[b] = p;
        bestedge_[(size_t)w] = bestedge_[b] = -1;
        if (t == 1) {
            leaves((long)b, queue_);
        } else {
            long base = blossombase_[b];
            assign_label(endpoint_[(size_t)mate_[(size_t)base]], 1, mate_[(size_t)base] ^ 1);
        }
    }

    long scan_blossom(long v, long w) {
        std::vector<long> path;
        long base = -1;
        while (v != -1 || w != -1) {
            size_t b = (size_t)inblossom_[(size_t)v];
            if (label_[b] & 4) {
                base = blossombase_[b];
                break;
            }
            path.push_back((long)b);
            label_[b] = 5;
            if (labelend_[b] == -1) {
                v = -1;
            } else {
                v = endpoint_[(size_t)labelend_[b]];
                b = (size_t)inblossom_[(size_t)v];
                v = endpoint_[(size_t)labelend_[b]];
            }
            if (w != -1) {
                std::swap(v, w);
            }
        }
        for (long b : path) {
            label_[(size_t)b] = 1;
        }
        return base;
    }

    void add_blossom(long base, size_t k) {
        long v = ei_[k], w = ej_[k];
        long bb = inblossom_[(size_t)base];
        long bv = inblossom_[(size_t)v];
        long bw = inblossom_[(size_t)w];
        long b = unused_.back();
        unused_.pop_back();
        size_t ub = (size_t)b;
        blossombase_[ub] = base;
        blossomparent_[ub] = -1;
        blossomparent_[(size_t)bb] = b;
        std::vector<long> path, endps;
        while (bv != bb) {
            blossomparent_[(size_t)bv] = b;
            path.push_back(bv);
            endps.push_back(labelend_[(size_t)bv]);
            v = endpoint_[(size_t)labelend_[(size_t)bv]];
            bv = inblossom_[(size_t)v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back((long)(2 * k));
        while (bw != bb) {
            blossomparent_[(size_t)bw] = b;
            path.push_back(bw);
            endps.push_back(labelend_[(size_t)bw] ^ 1);
            w = endpoint_[(size_t)labelend_[(size_t)bw]];
            bw = inblossom_[(size_t)w];
        }
        blossomchilds_[ub] = path;
        blossomendps_[ub] = endps;
        label_[ub] = 1;
        labelend_[ub] = labelend_[(size_t)bb];
        dual_[ub] = 0;
        for (long x : leaves(b)) {
            if (label_[(size_t)inblossom_[(size_t)x]] == 2) {
                queue_.push_back(x);
            }
            inblossom_[(size_t)x] = b;
        }
        std::vector<long> bestedgeto(2 * nv_, -1);
        for (long sub : path) {
            size_t s = (size_t)sub;
            std::vector<std::vector<long>> nblists;
            if (!has_bbe_[s]) {
                for (long x : leaves(sub)) {
                    std::vector<long> l;
                    for (long p : neighbend_[(size_t)x]) {
                        l.push_back(p / 2);
                    }
                    nblists.push_back(std::move(l));
                }
            } else {
                nblists.push_back(blossombestedges_[s]);
            }
            for (const auto &nblist : nblists) {
                for (long kk : nblist) {
                    long i = ei_[(size_t)kk], j = ej_[(size_t)kk];
                    if (inblossom_[(size_t)j] == b) {
                        std::swap(i, j);
                    }
                    long bj = inblossom_[(size_t)j];
                    if (bj != b && label_[(size_t)bj] == 1 &&
                        (bestedgeto[(size_t)bj] == -1 || slack((size_t)kk) < slack((size_t)bestedgeto[(size_t)bj]))) {
                        bestedgeto[(size_t)bj] = kk;
                    }
                }
            }
            blossombestedges_[s].clear();
            has_bbe_[s] = false;
            bestedge_[s] = -1;
        }
        blossombestedges_[ub].clear();
        for (long kk : bestedgeto) {
            if (kk != -1) {
                blossombestedges_[ub].push_back(kk);
            }
        }
        has_bbe_[ub] = true;
        bestedge_[ub] = -1;
        for (long kk : blossombestedges_[ub]) {
            if (bestedge_[ub] == -1 || slack((size_t)kk) < slack((size_t)bestedge_[ub])) {
                bestedge_[ub] = kk;
            }
        }
    }

    void expand_blossom(long b, bool endstage) {
        size_t ub = (size_t)b;
        for (long s : blossomchilds_[ub]) {
            blossomparent_[(size_t)s] = -1;
            if ((size_t)s < nv_) {
                inblossom_[(size_t)s] = s;
            } else if (endstage && dual_[(size_t)s] == 0) {
                expand_blossom(s, endstage);
            } else {
                for (long x : leaves(s)) {
                    inblossom_[(size_t)x] = s;
                }
            }
        }
        if (!endstage && label_[ub] == 2) {
            auto &childs = blossomchilds_[ub];
            auto &endps = blossomendps_[ub];
            long len = (long)childs.size();
            auto at = [&](const std::vector<long> &v, long idx) { return v[(size_t)(((idx % len) + len) % len)]; };
            long entrychild = inblossom_[(size_t)endpoint_[(size_t)(labelend_[ub] ^ 1)]];
            long j = (long)(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
            long jstep, endptrick;
            if (j & 1) {
                j -= len;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            long p = labelend_[ub];
            while (j != 0) {
                label_[(size_t)endpoint_[(size_t)(p ^ 1)]] = 0;
                label_[(size_t)endpoint_[(size_t)(at(endps, j - endptrick) ^ endptrick ^ 1)]] = 0;
                assign_label(endpoint_[(size_t)(p ^ 1)], 2, p);
                allow_[(size_t)(at(endps, j - endptrick) / 2)] = true;
                j += jstep;
                p = at(endps, j - endptrick) ^ endptrick;
                allow_[(size_t)(p / 2)] = true;
                j += jstep;
            }
            long bv = at(childs, j);
            label_[(size_t)endpoint_[(size_t)(p ^ 1)]] = label_[(size_t)bv] = 2;
            labelend_[(size_t)endpoint_[(size_t)(p ^ 1)]] = labelend_[(size_t)bv] = p;
            bestedge_[(size_t)bv] = -1;
            j += jstep;
            while (at(childs, j) != entrychild) {
                bv = at(childs, j);
                if (label_[(size_t)bv] == 1) {
                    j += jstep;
                    continue;
                }
                long found = -1;
                for (long x : leaves(bv)) {
                    if (label_[(size_t)x] != 0) {
                        found = x;
                        break;
                    }
                }
                if (found >= 0) {
                    label_[(size_t)found] = 0;
                    label_[(size_t)endpoint_[(size_t)mate_[(size_t)blossombase_[(size_t)bv]]]] = 0;
                    assign_label(found, 2, labelend_[(size_t)found]);
                }
                j += jstep;
            }
        }
        label_[ub] = labelend_[ub] = -1;
        blossomchilds_[ub].clear();
        blossomendps_[ub].clear();
        blossombase_[ub] = -1;
        blossombestedges_[ub].clear();
        has_bbe_[ub] = false;
        bestedge_[ub] = -1;
        unused_.push_back(b);
    }

    void augment_blossom(long b, long v) {
        size_t ub = (size_t)b;
        long t = v;
        while (blossomparent_[(size_t)t] != b) {
            t = blossomparent_[(size_t)t];
        }
        if ((size_t)t >= nv_) {
            augment_blossom(t, v);
        }
        auto &childs = blossomchilds_[ub];
        auto &endps = blossomendps_[ub];
        long len = (long)childs.size();
        auto at = [&](const std::vector<long> &vec, long idx) { return vec[(size_t)(((idx % len) + len) % len)]; };
        long i = (long)(std::find(childs.begin(), childs.end(), t) - childs.begin());
        long j = i, jstep, endptrick;
        if (i & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = at(childs, j);
            long p = at(endps, j - endptrick) ^ endptrick;
            if ((size_t)t >= nv_) {
                augment_blossom(t, endpoint_[(size_t)p]);
            }
            j += jstep;
            t = at(childs, j);
            if ((size_t)t >= nv_) {
                augment_blossom(t, endpoint_[(size_t)(p ^ 1)]);
            }
            mate_[(size_t)endpoint_[(size_t)p]] = p ^ 1;
            mate_[(size_t)endpoint_[(size_t)(p ^ 1)]] = p;
        }
        std::rotate(childs.begin(), childs.begin() + i, childs.end());
        std::rotate(endps.begin(), endps.begin() + i, endps.end());
        blossombase_[ub] = blossombase_[(size_t)childs[0]];
    }

    void augment_matching(size_t k) {
        long v = ei_[k], w = ej_[k];
        std::pair<long, long> starts[2] = {{v, (long)(2 * k + 1)}, {w, (long)(2 * k)}};
        for (auto [s, p] : starts) {
            while (true) {
                long bs = inblossom_[(size_t)s];
                if ((size_t)bs >= nv_) {
                    augment_blossom(bs, s);
                }
                mate_[(size_t)s] = p;
                if (labelend_[(size_t)bs] == -1) {
                    break;
                }
                long t = endpoint_[(size_t)labelend_[(size_t)bs]];
                long bt = inblossom_[(size_t)t];
                s = endpoint_[(size_t)labelend_[(size_t)bt]];
                long j = endpoint_[(size_t)(labelend_[(size_t)bt] ^ 1)];
                if ((size_t)bt >= nv_) {
                    augment_blossom(bt, j);
                }
                mate_[(size_t)j] = labelend_[(size_t)bt];
                p = labelend_[(size_t)bt] ^ 1;
            }
        }
    }

    size_t nv_, ne_ = 0;
    bool maxcard_;
    std::vector<long> ei_, ej_;
    std::vector<int64_t> ew_;
    std::vector<long> endpoint_;
    std::vector<std::vector<long>> neighbend_;
    std::vector<long> mate_;
    std::vector<int> label_;
    std::vector<long> labelend_, inblossom_, blossomparent_;
    std::vector<std::vector<long>> blossomchilds_, blossomendps_;
    std::vector<long> blossombase_, bestedge_;
    std::vector<std::vector<long>> blossombestedges_;
    std::vector<bool> has_bbe_;
    std::vector<long> unused_;
    std::vector<int64_t> dual_;
    std::vector<bool> allow_;
    std::vector<long> queue_;
};

}  // namespace

std::vector<long> max_weight_matching(size_t n, const std::vector<std::tuple<size_t, size_t, int64_t>> &edges,
                                      bool max_cardinality) {
    return Blossom(n, edges, max_cardinality).run();
}

bool is_matchable(const DetectorErrorModel &dem) {
    for (const auto &f : dem.faults) {
        if (f.detectors.size() > 2) {
            return false;
        }
    }
    return true;
}

namespace {

using DetKey = std::vector<uint32_t>;

/// All ways to split a detector set into blocks of one or two detectors.
void pairings(const std::vector<uint32_t> &dets, size_t used_mask, std::vector<DetKey> &cur,
              std::vector<std::vector<DetKey>> &out) {
    size_t n = dets.size();
    size_t first = 0;
    while (first < n && (used_mask >> first & 1)) {
        first++;
    }
    if (first == n) {
        out.push_back(cur);
        return;
    }
    used_mask |= size_t{1} << first;
    cur.push_back({dets[first]});
    pairings(dets, used_mask, cur, out);
    cur.pop_back();
    for (size_t j = first + 1; j < n; j++) {
        if (!(used_mask >> j & 1)) {
            cur.push_back({dets[first], dets[j]});
            pairings(dets, used_mask | size_t{1} << j, cur, out);
            cur.pop_back();
        }
    }
}

uint64_t obs_mask(const std::vector<uint32_t> &obs) {
    uint64_t m = 0;
    for (uint32_t o : obs) {
        if (o >= 64) {
            throw std::invalid_argument("graph decoding supports at most 64 observables");
        }
        m ^= uint64_t{1} << o;
    }
    return m;
}

std::vector<uint32_t> mask_obs(uint64_t m) {
    std::vector<uint32_t> out;
    for (uint32_t o = 0; o < 64; o++) {
        if (m >> o & 1) {
            out.push_back(o);
        }
    }
    return out;
}

}  // namespace

DetectorErrorModel decompose_graphlike(const DetectorErrorModel &dem) {
    // Most likely observable mask of every graphlike detector set.
    std::map<DetKey, std::pair<double, uint64_t>> edges;
    for (const auto &f : dem.faults) {
        if (f.detectors.size() <= 2 && !f.detectors.empty()) {
            auto it = edges.find(f.detectors);
            if (it == edges.end() || f.p > it->second.first) {
                edges[f.detectors] = {f.p, obs_mask(f.observables)};
            }
        }
    }
    DetectorErrorModel out;
    out.n_detectors = dem.n_detectors;
    out.n_observables = dem.n_observables;
    out.detector_origin = dem.detector_origin;
    out.observable_origin = dem.observable_origin;
    std::map<std::pair<DetKey, uint64_t>, size_t> index;
    auto add = [&](const DetKey &dets, uint64_t obs, double p) {
        auto key = std::make_pair(dets, obs);
        auto it = index.find(key);
        if (it == index.end()) {
            index[key] = out.faults.size();
            out.faults.push_back(Fault{p, dets, mask_obs(obs)});
        } else {
            Fault &f = out.faults[it->second];
            f.p = xor_prob(f.p, p);
        }
    };
    for (const auto &f : dem.faults) {
        if (f.detectors.size() <= 2) {
            add(f.detectors, obs_mask(f.observables), f.p);
            continue;
        }
        if (f.detectors.size() > 12) {
            throw std::invalid_argument("fault flips too many detectors to decompose");
        }
        uint64_t target = obs_mask(f.observables);
        std::vector<std::vector<DetKey>> options;
        std::vector<DetKey> cur;
        pairings(f.detectors, 0, cur, options);
        // Prefer fewer blocks, then blocks that all exist; allow one unknown
        // block to absorb the remaining observable parity.
        const std::vector<DetKey> *best = nullptr;
        std::vector<uint64_t> best_obs;
        int best_score = std::numeric_limits<int>::max();
        for (const auto &opt : options) {
            size_t unknown = 0, unknown_at = 0;
            uint64_t acc = 0;
            std::vector<uint64_t> obs(opt.size(), 0);
            for (size_t i = 0; i < opt.size(); i++) {
                auto it = edges.find(opt[i]);
                if (it == edges.end()) {
                    unknown++;
                    unknown_at = i;
                } else {
                    obs[i] = it->second.second;
                    acc ^= obs[i];
                }
            }
            if (unknown > 1 || (unknown == 0 && acc != target)) {
                continue;
            }
            if (unknown == 1) {
                obs[unknown_at] = acc ^ target;
            }
            int score = (int)opt.size() * 2 + (int)unknown;
            if (score < best_score) {
                best_score = score;
                best = &opt;
                best_obs = obs;
            }
        }
        if (!best) {
            throw std::invalid_argument("fault cannot be decomposed into graphlike components");
        }
        for (size_t i = 0; i < best->size(); i++) {
            add((*best)[i], best_obs[i], f.p);
        }
    }
    return out;
}

MwpmDecoder::MwpmDecoder(const DetectorErrorModel &dem) : n_det_(dem.n_detectors), n_obs_(dem.n_observables) {
    if (!is_matchable(dem)) {
        throw std::invalid_argument(
            "detector error model has faults flipping more than two detectors; decompose it or use bposd_decode");
    }
    if (n_obs_ > 64) {
        throw std::invalid_argument("matching supports at most 64 observables");
    }
    // Parallel edges with the same observables merge; otherwise the more
    // likely one is kept.
    std::map<std::pair<uint32_t, uint32_t>, std::pair<double, uint64_t>> merged;
    uint32_t boundary = (uint32_t)n_det_;
    for (const auto &f : dem.faults) {
        if (f.detectors.empty()) {
            continue;
        }
        uint32_t a = f.detectors[0];
        uint32_t b = f.detectors.size() == 2 ? f.detectors[1] : boundary;
        auto key = std::minmax(a, b);
        uint64_t m = obs_mask(f.observables);
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged[key] = {f.p, m};
        } else if (it->second.second == m) {
            it->second.first = xor_prob(it->second.first, f.p);
        } else if (f.p > it->second.first) {
            it->second = {f.p, m};
        }
    }
    adj_.assign(n_det_ + 1, {});
    for (const auto &[key, val] : merged) {
        double p = val.first;
        double w = p >= 0.5 ? 0.0 : std::log((1 - p) / p);
        adj_[key.first].push_back({key.second, w, val.second});
        adj_[key.second].push_back({key.first, w, val.second});
    }
    if (n_det_ <= 4096) {
        rows_.reserve(n_det_);
        for (uint32_t i = 0; i < n_det_; i++) {
            rows_.push_back(shortest_paths(i));
        }
    }
}

MwpmDecoder::Row MwpmDecoder::shortest_paths(uint32_t src) const {
    size_t n = n_det_ + 1;
    Row row{std::vector<double>(n, std::numeric_limits<double>::infinity()), std::vector<uint64_t>(n, 0)};
    using Item = std::pair<double, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    row.dist[src] = 0;
    pq.push({0.0, src});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > row.dist[u]) {
            continue;
        }
        if (u == n_det_) {
            continue;  // paths do not pass through the boundary
        }
        for (const Edge &e : adj_[u]) {
            double nd = d + e.w;
            if (nd < row.dist[e.to]) {
                row.dist[e.to] = nd;
                row.obs[e.to] = row.obs[u] ^ e.obs;
                pq.push({nd, e.to});
            }
        }
    }
    return row;
}

std::pair<uint64_t, double> MwpmDecoder::solve(const BitVector &syndrome) const {
    if (syndrome.size() != n_det_) {
        throw std::invalid_argument("syndrome length does not match the model");
    }
    auto flagged = syndrome.ones();
    size_t m = flagged.size();
    if (m == 0) {
        return {0, 0.0};
    }
    std::vector<Row> local;
    std::vector<const Row *> rows(m);
    if (!rows_.empty()) {
        for (size_t i = 0; i < m; i++) {
            rows[i] = &rows_[flagged[i]];
        }
    } else {
        local.reserve(m);
        for (size_t i = 0; i < m; i++) {
            local.push_back(shortest_paths((uint32_t)flagged[i]));
            rows[i] = &local.back();
        }
    }
    // Node i < m is flagged detector i; node m + i is its private boundary copy.
    constexpr double kScale = 1 << 20;
    double maxw = 0;
    for (size_t i = 0; i < m; i++) {
        for (size_t j = i + 1; j < m; j++) {
            double d = rows[i]->dist[flagged[j]];
            if (std::isfinite(d)) {
                maxw = std::max(maxw, d);
            }
        }
        double d = rows[i]->dist[n_det_];
        if (std::isfinite(d)) {
            maxw = std::max(maxw, d);
        }
    }
    int64_t big = (int64_t)std::llround(maxw * kScale) + 1;
    std::vector<std::tuple<size_t, size_t, int64_t>> edges;
    for (size_t i = 0; i < m; i++) {
        for (size_t j = i + 1; j < m; j++) {
            double d = rows[i]->dist[flagged[j]];
            if (std::isfinite(d)) {
                edges.emplace_back(i, j, big - std::llround(d * kScale));
            }
            edges.emplace_back(m + i, m + j, big);
        }
        double d = rows[i]->dist[n_det_];
        if (std::isfinite(d)) {
            edges.emplace_back(i, m + i, big - std::llround(d * kScale));
        }
    }
    auto mate = max_weight_matching(2 * m, edges, true);
    uint64_t obs = 0;
    double total = 0;
    for (size_t i = 0; i < m; i++) {
        long j = mate[i];
        if (j < 0) {
            throw std::runtime_error("syndrome has no perfect matching");
        }
        if ((size_t)j == m + i) {
            obs ^= rows[i]->obs[n_det_];
            total += rows[i]->dist[n_det_];
        } else if ((size_t)j < m && (size_t)j > i) {
            obs ^= rows[i]->obs[flagged[(size_t)j]];
            total += rows[i]->dist[flagged[(size_t)j]];
        }
    }
    return {obs, total};
}

BitVector MwpmDecoder::decode(const BitVector &syndrome) const {
    uint64_t m = solve(syndrome).first;
    BitVector out(n_obs_);
    for (size_t o = 0; o < n_obs_; o++) {
        if (m >> o & 1) {
            out.set(o);
        }
    }
    return out;
}

double MwpmDecoder::matching_weight(const BitVector &syndrome) const {
    return solve(syndrome).second;
}

BitVector mwpm_decode(const DetectorErrorModel &dem, const BitVector &syndrome) {
    return MwpmDecoder(dem).decode(syndrome);
}

BpOsdDecoder::BpOsdDecoder(const BitMatrix &h, const std::vector<double> &priors, const BpOsdOptions &opts)
    : rows_(h.rows()), cols_(h.cols()), opts_(opts) {
    if (priors.size() != cols_) {
        throw std::invalid_argument("one prior per column required");
    }
    check_vars_.assign(rows_, {});
    var_checks_.assign(cols_, {});
    columns_.assign(cols_, BitVector(rows_));
    for (size_t i = 0; i < rows_; i++) {
        for (size_t j : h.row_support(i)) {
            check_vars_[i].push_back((uint32_t)j);
            var_checks_[j].push_back((uint32_t)i);
            columns_[j].set(i);
        }
    }
    for (double p : priors) {
        if (!(p > 0 && p < 1)) {
            throw std::invalid_argument("priors must lie in (0, 1)");
        }
        prior_llr_.push_back(std::clamp(std::log((1 - p) / p), -opts_.clip, opts_.clip));
    }
    obs_of_fault_.assign(cols_, {});
}

BpOsdDecoder::BpOsdDecoder(const DetectorErrorModel &dem, const BpOsdOptions &opts)
    : BpOsdDecoder(dem.check_matrix(), dem.priors(), opts) {
    n_obs_ = dem.n_observables;
    for (size_t j = 0; j < cols_; j++) {
        obs_of_fault_[j] = dem.faults[j].observables;
    }
}

BpOsdResult BpOsdDecoder::solve(const BitVector &syndrome) const {
    if (syndrome.size() != rows_) {
        throw std::invalid_argument("syndrome length does not match the check matrix");
    }
    BpOsdResult res;
    res.errors = BitVector(cols_);
    if (!syndrome.any()) {
        res.bp_converged = true;
        return res;
    }
    double clip = opts_.clip;
    std::vector<double> post = prior_llr_;
    std::vector<std::vector<double>> msg(rows_);
    for (size_t i = 0; i < rows_; i++) {
        msg[i].assign(check_vars_[i].size(), 0.0);
    }
    std::vector<double> q;
    auto satisfied = [&](const BitVector &e) {
        for (size_t i = 0; i < rows_; i++) {
            bool v = false;
            for (uint32_t j : check_vars_[i]) {
                v ^= e.get(j);
            }
            if (v != syndrome.get(i)) {
                return false;
            }
        }
        return true;
    };
    for (size_t it = 1; it <= opts_.max_iterations; it++) {
        res.iterations = it;
        // Serial schedule: checks in ascending order update posteriors in place.
        for (size_t i = 0; i < rows_; i++) {
            const auto &vars = check_vars_[i];
            size_t deg = vars.size();
            if (deg == 0) {
                continue;
            }
            q.resize(deg);
            bool sign = syndrome.get(i);
            double min1 = std::numeric_limits<double>::infinity(), min2 = min1;
            size_t argmin = 0;
            for (size_t k = 0; k < deg; k++) {
                q[k] = post[vars[k]] - msg[i][k];
                double a = std::abs(q[k]);
                sign ^= q[k] < 0;
                if (a < min1) {
                    min2 = min1;
                    min1 = a;
                    argmin = k;
                } else if (a < min2) {
                    min2 = a;
                }
            }
            for (size_t k = 0; k < deg; k++) {
                bool s = sign ^ (q[k] < 0);
                double mag = deg == 1 ? clip : opts_.scaling * (k == argmin ? min2 : min1);
                double m = std::min(mag, clip);
                msg[i][k] = s ? -m : m;
                post[vars[k]] = std::clamp(q[k] + msg[i][k], -clip, clip);
            }
        }
        for (size_t j = 0; j < cols_; j++) {
            res.errors.set(j, post[j] < 0);
        }
        if (satisfied(res.errors)) {
            res.bp_converged = true;
            return res;
        }
    }

    // Order-0 OSD: take columns from most to least likely flipped and stop
    // once the syndrome lies in their span.
    std::vector<uint32_t> order(cols_);
    for (uint32_t j = 0; j < cols_; j++) {
        order[j] = j;
    }
    std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) { return post[a] < post[b]; });
    struct Basis {
        BitVector vec;
        size_t pivot;
        BitVector combo;
    };
    std::vector<Basis> basis;
    std::vector<uint32_t> chosen;
    BitVector residual = syndrome;
    BitVector rcombo(rows_);
    res.errors.clear();
    for (uint32_t j : order) {
        if (!residual.any()) {
            break;
        }
        if (chosen.size() >= rows_) {
            break;
        }
        BitVector v = columns_[j];
        BitVector combo(rows_);
        combo.set(chosen.size());
        for (const auto &b : basis) {
            if (v.get(b.pivot)) {
                v ^= b.vec;
                combo ^= b.combo;
            }
        }
        if (!v.any()) {
            continue;
        }
        size_t pivot = v.ones().front();
        chosen.push_back(j);
        if (residual.get(pivot)) {
            residual ^= v;
            rcombo ^= combo;
        }
        basis.push_back({std::move(v), pivot, std::move(combo)});
    }
    if (residual.any()) {
        res.satisfiable = false;
        return res;
    }
    for (size_t k : rcombo.ones()) {
        res.errors.set(chosen[k]);
    }
    return res;
}

BitVector BpOsdDecoder::decode(const BitVector &syndrome) const {
    BpOsdResult r = solve(syndrome);
    BitVector out(n_obs_);
    for (size_t j : r.errors.ones()) {
        for (uint32_t o : obs_of_fault_[j]) {
            out.flip(o);
        }
    }
    return out;
}

BpOsdResult bposd_decode(const BitMatrix &h, const std::vector<double> &priors, const BitVector &syndrome,
                         const BpOsdOptions &opts) {
    return BpOsdDecoder(h, priors, opts).solve(syndrome);
}

ExhaustiveDecoder::ExhaustiveDecoder(const DetectorErrorModel &dem)
    : n_det_(dem.n_detectors), n_obs_(dem.n_observables) {
    if (dem.faults.size() > kMaxFaults) {
        throw std::invalid_argument("exhaustive decoding supports at most 22 faults");
    }
    if (n_det_ > 64 || n_obs_ > 64) {
        throw std::invalid_argument("exhaustive decoding supports at most 64 detectors and observables");
    }
    for (const auto &f : dem.faults) {
        uint64_t d = 0;
        for (uint32_t x : f.detectors) {
            d ^= uint64_t{1} << x;
        }
        det_.push_back(d);
        obs_.push_back(obs_mask(f.observables));
        log_ratio_.push_back(std::log(f.p) - std::log1p(-f.p));
        log_base_ += std::log1p(-f.p);
    }
}

std::vector<std::pair<uint64_t, double>> ExhaustiveDecoder::class_weights(const BitVector &syndrome) const {
    if (syndrome.size() != n_det_) {
        throw std::invalid_argument("syndrome length does not match the model");
    }
    uint64_t target = n_det_ ? syndrome.data()[0] : 0;
    std::map<uint64_t, double> classes;
    size_t n = det_.size();
    uint64_t det = 0, obs = 0;
    double lw = 0;
    std::vector<bool> in(n, false);
    for (uint64_t g = 0;; g++) {
        if (det == target) {
            classes[obs] += std::exp(log_base_ + lw);
        }
        if (g + 1 >= (uint64_t{1} << n)) {
            break;
        }
        // Gray code: flip the lowest set bit of g + 1.
        size_t k = (size_t)__builtin_ctzll(g + 1);
        det ^= det_[k];
        obs ^= obs_[k];
        lw += in[k] ? -log_ratio_[k] : log_ratio_[k];
        in[k] = !in[k];
    }
    return {classes.begin(), classes.end()};
}

BitVector ExhaustiveDecoder::decode(const BitVector &syndrome) const {
    auto classes = class_weights(syndrome);
    uint64_t best = 0;
    double best_w = -1;
    for (const auto &[m, w] : classes) {
        if (w > best_w) {
            best_w = w;
            best = m;
        }
    }
    BitVector out(n_obs_);
    for (size_t o = 0; o < n_obs_; o++) {
        if (best >> o & 1) {
            out.set(o);
        }
    }
    return out;
}

BitVector exhaustive_decode(const DetectorErrorModel &dem, const BitVector &syndrome) {
    return ExhaustiveDecoder(dem).decode(syndrome);
}

size_t count_failures(const Decoder &decoder, const SampleBatch &batch, size_t workers) {
    if (workers == 0) {
        workers = default_workers();
    }
    workers = std::max<size_t>(1, std::min(workers, batch.shots));
    std::vector<size_t> fails(workers, 0);
    auto run = [&](size_t w) {
        size_t lo = batch.shots * w / workers, hi = batch.shots * (w + 1) / workers;
        for (size_t s = lo; s < hi; s++) {
            if (!(decoder.decode(batch.syndromes[s]) == batch.observable_flips[s])) {
                fails[w]++;
            }
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (size_t w = 0; w < workers; w++) {
            pool.emplace_back(run, w);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    size_t total = 0;
    for (size_t f : fails) {
        total += f;
    }
    return total;
}

}  // namespace sqec
