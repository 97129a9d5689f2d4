#pragma once

#include <cstdint>
#include <vector>

#include "wumkit/enrichment.hpp"
#include "wumkit/synth.hpp"

namespace bench {

// Cached per size so that repetitions do not pay for generation.
const std::vector<wumkit::PageviewEvent>& events(std::uint64_t sessions);
const wumkit::SessionTable& table(std::uint64_t sessions);
const std::vector<wumkit::EnrichedSession>& sessions(std::uint64_t sessions);

}  // namespace bench
