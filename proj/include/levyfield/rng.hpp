/*
   Copyright 2026 The levyfield Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cstdint>

namespace levy {

// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

// Counter-based stream: draws are a pure function of (master_seed,
// stream_index, draw number), so streams can be generated in any order.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : seed_(master_seed), index_(stream_index)
    {
    }

    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t stream_index() const { return index_; }

    std::uint64_t next_u64();
    // Uniform on the open interval (0, 1).
    double uniform();
    double normal();

    // An independent stream derived from this one's seed.
    RngStream substream(std::uint64_t index) const { return RngStream(seed_, index); }

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t index_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int used_ = 4;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace levy
