#pragma once

// Dense tensors over binary indices and the generalized product used by
// hyperedge contraction: factors sharing an index are aligned element-wise
// on it, and only the requested indices are summed.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "surfsim/channel.hpp"

namespace surfsim {

struct Tensor {
    std::vector<int> indices;         // index ids; indices[0] is the most significant bit
    std::vector<complex_t> data;      // size 2^rank

    int rank() const { return static_cast<int>(indices.size()); }
    size_t size() const { return data.size(); }

    static Tensor scalar(complex_t v) { return Tensor{{}, {v}}; }

    // Position of an index id, -1 if absent.
    int find(int id) const {
        for (int i = 0; i < rank(); ++i)
            if (indices[i] == id) return i;
        return -1;
    }

    // Slice at index id fixed to value (0/1).
    Tensor fixed(int id, int value) const {
        const int pos = find(id);
        if (pos < 0) throw std::invalid_argument("Tensor::fixed: no such index");
        Tensor out;
        out.indices = indices;
        out.indices.erase(out.indices.begin() + pos);
        out.data.resize(data.size() / 2);
        const size_t hi = size_t(1) << (rank() - 1 - pos);  // stride of the fixed bit
        size_t w = 0;
        for (size_t i = 0; i < data.size(); ++i)
            if (((i / hi) & 1) == static_cast<size_t>(value)) out.data[w++] = data[i];
        return out;
    }

    // Reorder to the given id permutation.
    Tensor permuted(const std::vector<int>& order) const {
        if (order.size() != indices.size())
            throw std::invalid_argument("Tensor::permuted: order size mismatch");
        const int r = rank();
        std::vector<int> src_pos(r);
        for (int t = 0; t < r; ++t) {
            const int p = find(order[t]);
            if (p < 0) throw std::invalid_argument("Tensor::permuted: unknown index id");
            src_pos[t] = p;
        }
        Tensor out;
        out.indices = order;
        out.data.resize(data.size());
        for (size_t i = 0; i < out.data.size(); ++i) {
            size_t src = 0;
            for (int t = 0; t < r; ++t) {
                const size_t bit = (i >> (r - 1 - t)) & 1;
                src |= bit << (r - 1 - src_pos[t]);
            }
            out.data[i] = data[src];
        }
        return out;
    }
};

// Multiply a set of tensors, summing over `sum_ids`. Shared indices that
// are not summed appear once in the output (diagonal alignment).
// Output index order: first appearance across factors, sum ids excluded.
inline Tensor multiply_sum(const std::vector<const Tensor*>& factors,
                           const std::vector<int>& sum_ids,
                           size_t max_out_entries = size_t(1) << 34) {
    if (factors.empty()) throw std::invalid_argument("multiply_sum: no factors");
    if (factors.size() > 2) {
        // Reduce pairwise: repeatedly merge the two factors with the
        // smallest combined index set, summing an index as soon as it is
        // confined to the pair being merged. Each pass then touches every
        // entry with a single two-factor product instead of an n-factor one.
        std::vector<Tensor> owned;
        owned.reserve(factors.size());
        for (const Tensor* f : factors) owned.push_back(*f);
        std::vector<int> remaining(sum_ids);
        while (owned.size() > 1) {
            size_t bi = 0, bj = 1;
            int best = 1 << 30;
            for (size_t i = 0; i < owned.size(); ++i)
                for (size_t j = i + 1; j < owned.size(); ++j) {
                    std::vector<int> u = owned[i].indices;
                    for (int id : owned[j].indices)
                        if (std::find(u.begin(), u.end(), id) == u.end()) u.push_back(id);
                    const int c = static_cast<int>(u.size());
                    if (c < best) {
                        best = c;
                        bi = i;
                        bj = j;
                    }
                }
            std::vector<int> sums_now;
            for (int id : remaining) {
                bool in_pair = owned[bi].find(id) >= 0 || owned[bj].find(id) >= 0;
                if (!in_pair) continue;
                bool elsewhere = false;
                for (size_t k = 0; k < owned.size() && !elsewhere; ++k)
                    if (k != bi && k != bj && owned[k].find(id) >= 0) elsewhere = true;
                if (!elsewhere) sums_now.push_back(id);
            }
            Tensor merged =
                multiply_sum({&owned[bi], &owned[bj]}, sums_now, max_out_entries);
            for (int id : sums_now)
                remaining.erase(std::remove(remaining.begin(), remaining.end(), id),
                                remaining.end());
            owned.erase(owned.begin() + bj);
            owned[bi] = std::move(merged);
        }
        if (remaining.empty()) return std::move(owned[0]);
        return multiply_sum({&owned[0]}, remaining, max_out_entries);
    }
    // Largest factor first: the output index order then follows its memory
    // layout, keeping the dominant reads and all writes near-sequential.
    std::vector<const Tensor*> ordered(factors);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const Tensor* a, const Tensor* b) { return a->rank() > b->rank(); });
    std::vector<int> out_ids;
    std::vector<int> all_ids;
    auto is_sum = [&](int id) { return std::find(sum_ids.begin(), sum_ids.end(), id) != sum_ids.end(); };
    for (const Tensor* f : ordered)
        for (int id : f->indices)
            if (std::find(all_ids.begin(), all_ids.end(), id) == all_ids.end()) {
                all_ids.push_back(id);
                if (!is_sum(id)) out_ids.push_back(id);
            }
    for (int id : sum_ids)
        if (std::find(all_ids.begin(), all_ids.end(), id) == all_ids.end())
            throw std::invalid_argument("multiply_sum: sum index not present in any factor");

    const int r = static_cast<int>(out_ids.size());
    const int s = static_cast<int>(sum_ids.size());
    if ((size_t(1) << r) > max_out_entries)
        throw std::runtime_error("multiply_sum: output tensor exceeds the memory cap (rank " +
                                 std::to_string(r) + ")");

    // Counter bit t corresponds to global[t]; out ids are listed reversed so
    // that counter bit t carries output stride 2^t and the gray-code walk
    // writes the output sequentially.
    std::vector<int> global(out_ids.rbegin(), out_ids.rend());
    for (int id : sum_ids) global.push_back(id);
    const int g = r + s;
    const size_t nf = ordered.size();
    std::vector<std::vector<size_t>> weight(nf + 1, std::vector<size_t>(g, 0));
    for (size_t f = 0; f < nf; ++f) {
        const Tensor& t = *ordered[f];
        for (int k = 0; k < t.rank(); ++k) {
            const int pos =
                static_cast<int>(std::find(global.begin(), global.end(), t.indices[k]) - global.begin());
            weight[f][pos] = size_t(1) << (t.rank() - 1 - k);
        }
    }
    // Destination weights for the output tensor (out_ids[0] msb).
    for (int t = 0; t < r; ++t) weight[nf][t] = size_t(1) << t;

    Tensor out;
    out.indices = out_ids;
    out.data.assign(size_t(1) << r, complex_t(0, 0));

    std::vector<size_t> base(nf + 1, 0);
    const size_t n_out = size_t(1) << r;
    const size_t n_sum = size_t(1) << s;
    std::vector<size_t> off(nf, 0);
    for (size_t i = 0;; ) {
        // Inner sum loop with its own incremental offsets.
        for (size_t f = 0; f < nf; ++f) off[f] = base[f];
        complex_t acc(0, 0);
        double acc_re = 0, acc_im = 0;
        for (size_t j = 0;; ) {
            if (nf == 2) {
                // Component arithmetic avoids the library complex-multiply
                // call in the hot path.
                const complex_t& x = ordered[0]->data[off[0]];
                const complex_t& y = ordered[1]->data[off[1]];
                acc_re += x.real() * y.real() - x.imag() * y.imag();
                acc_im += x.real() * y.imag() + x.imag() * y.real();
            } else if (nf == 1) {
                acc += ordered[0]->data[off[0]];
            } else {
                complex_t prod(1, 0);
                for (size_t f = 0; f < nf; ++f) prod *= ordered[f]->data[off[f]];
                acc += prod;
            }
            const size_t jn = j + 1;
            if (jn == n_sum) break;
            size_t diff = j ^ jn;
            int t = r;
            while (diff) {
                if (diff & 1) {
                    const bool set = (jn >> (t - r)) & 1;
                    for (size_t f = 0; f < nf; ++f)
                        off[f] = set ? off[f] + weight[f][t] : off[f] - weight[f][t];
                }
                diff >>= 1;
                ++t;
            }
            j = jn;
        }
        out.data[base[nf]] = nf == 2 ? complex_t(acc_re, acc_im) : acc;
        const size_t in = i + 1;
        if (in == n_out) break;
        size_t diff = i ^ in;
        int t = 0;
        while (diff) {
            if (diff & 1) {
                const bool set = (in >> t) & 1;
                for (size_t f = 0; f <= nf; ++f)
                    base[f] = set ? base[f] + weight[f][t] : base[f] - weight[f][t];
            }
            diff >>= 1;
            ++t;
        }
        i = in;
    }
    return out;
}

}  // namespace surfsim
