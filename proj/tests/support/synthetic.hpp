// Small builders shared by the unit and acceptance tests.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "wumkit/model.hpp"
#include "wumkit/synth.hpp"

namespace testkit {

/// 2022-11-22 13:00:05 plus `offset` seconds.
wumkit::Timestamp at(std::int64_t offset);

/// A visitor pageview; adjust fields on the returned value as needed.
wumkit::PageviewEvent pageview(wumkit::LogId log_id, wumkit::SessionId session,
                               std::int64_t offset, wumkit::ServiceId service,
                               std::uint32_t page_id = 3);

/// An authenticated pageview of `user`.
wumkit::PageviewEvent user_pageview(wumkit::LogId log_id, wumkit::SessionId session,
                                    std::int64_t offset, wumkit::ServiceId service,
                                    wumkit::UserId user, std::uint32_t page_id = 3);

/// Default generator profile calibrated to the standard targets.
wumkit::GeneratorConfig calibrated_config(std::uint64_t sessions, std::uint64_t seed);

std::vector<wumkit::PageviewEvent> synthetic_events(std::uint64_t sessions,
                                                    std::uint64_t seed,
                                                    unsigned threads = 0);

std::string read_file(const std::filesystem::path& path);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace testkit
