#include "synthetic.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace testkit {

wumkit::Timestamp at(std::int64_t offset) {
  using namespace std::chrono;
  const sys_days day = year{2022} / November / 22;
  return day + hours{13} + seconds{5 + offset};
}

wumkit::PageviewEvent pageview(wumkit::LogId log_id, wumkit::SessionId session,
                               std::int64_t offset, wumkit::ServiceId service,
                               std::uint32_t page_id) {
  wumkit::PageviewEvent e;
  e.log_id = log_id;
  e.session_id = session;
  e.timestamp = at(offset);
  e.service_id = service;
  e.page_id = page_id;
  e.page_duration = 30;
  e.page_load = 0.25;
  return e;
}

wumkit::PageviewEvent user_pageview(wumkit::LogId log_id, wumkit::SessionId session,
                                    std::int64_t offset, wumkit::ServiceId service,
                                    wumkit::UserId user, std::uint32_t page_id) {
  auto e = pageview(log_id, session, offset, service, page_id);
  e.login_state = wumkit::LoginState::authenticated;
  e.user_id = user;
  e.user_type = 6;
  e.sex = 2;
  e.age = 18;
  return e;
}

wumkit::GeneratorConfig calibrated_config(std::uint64_t sessions, std::uint64_t seed) {
  auto config = wumkit::calibrate(wumkit::default_generator_config());
  config.session_count = sessions;
  config.seed = seed;
  return config;
}

std::vector<wumkit::PageviewEvent> synthetic_events(std::uint64_t sessions,
                                                    std::uint64_t seed, unsigned threads) {
  return wumkit::generate(calibrated_config(sessions, seed), threads);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("wumkit-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testkit
