#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ppcp {

namespace detail {
inline constexpr std::int64_t kReplicationBlock = 1024;
}

template <class Slot>
Slot run_replications(std::int64_t reps, std::uint64_t seed, const std::function<Slot()>& make_slot,
                      const std::function<void(std::int64_t, Rng&, Slot&)>& body,
                      const std::function<void(Slot&, const Slot&)>& merge) {
    const std::int64_t blocks = (reps + detail::kReplicationBlock - 1) / detail::kReplicationBlock;
    std::vector<Slot> partial;
    partial.reserve(static_cast<std::size_t>(blocks));
    for (std::int64_t b = 0; b < blocks; ++b) {
        partial.push_back(make_slot());
    }

    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (std::int64_t b = next++; b < blocks; b = next++) {
            try {
                const std::int64_t end = std::min(reps, (b + 1) * detail::kReplicationBlock);
                for (std::int64_t rep = b * detail::kReplicationBlock; rep < end; ++rep) {
                    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(rep));
                    body(rep, rng, partial[static_cast<std::size_t>(b)]);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = blocks;
            }
        }
    };

    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::int64_t>(thread_count(), 1, std::max<std::int64_t>(blocks, 1)));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < workers; ++i) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    Slot total = make_slot();
    for (const Slot& p : partial) {
        merge(total, p);
    }
    return total;
}

}  // namespace ppcp
