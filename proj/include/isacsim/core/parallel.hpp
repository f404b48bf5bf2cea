// SPDX-License-Identifier: Apache-2.0
//
// isacsim: HAPS integrated sensing and communication simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace isacsim
{
    // Runs fn(i) for i in [0, n). Each index is processed exactly once; results
    // must be written to per-index slots so the outcome is independent of the
    // number of workers and of scheduling order.
    template <typename Fn>
    void parallel_for(std::size_t n, std::size_t workers, Fn &&fn)
    {
        if (workers <= 1 || n <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                fn(i);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto body = [&]
        {
            for (;;)
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        };

        const std::size_t count = std::min(workers, n);
        std::vector<std::jthread> pool;
        pool.reserve(count - 1);
        for (std::size_t t = 1; t < count; ++t)
            pool.emplace_back(body);
        body();
        pool.clear();

        if (failure)
            std::rethrow_exception(failure);
    }

    inline std::size_t hardware_workers()
    {
        return std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
}
