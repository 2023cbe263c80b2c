#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "qi/comparability.hpp"
#include "qi/kernels.hpp"
#include "qi/pair_sums.hpp"

namespace qi::detail {

/// Kernels bound to a dataset, shared between the requested pairs so the
/// rank pass runs at most once per coordinate.
class BoundPairs {
public:
    BoundPairs(const Dataset& data, std::span<const KernelPair> pairs) {
        for (const auto& p : pairs) {
            g_.push_back(bind(entry_cache_, p.g, data.entries()));
            h_.push_back(bind(exit_cache_, p.h, data.exits()));
        }
    }

    std::size_t size() const { return g_.size(); }

    double product(std::size_t k, std::size_t i, std::size_t j) const {
        return (*g_[k])(i, j) * (*h_[k])(i, j);
    }

private:
    using Cache = std::array<std::unique_ptr<BoundKernel>, 3>;

    static const BoundKernel* bind(Cache& cache, KernelSpec spec, std::span<const double> v) {
        auto& slot = cache[static_cast<std::size_t>(spec.kind)];
        if (!slot) slot = std::make_unique<BoundKernel>(spec, v);
        return slot.get();
    }

    Cache entry_cache_;
    Cache exit_cache_;
    std::vector<const BoundKernel*> g_;
    std::vector<const BoundKernel*> h_;
};

}  // namespace qi::detail
