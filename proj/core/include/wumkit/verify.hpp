#ifndef WUMKIT_VERIFY_HPP_
#define WUMKIT_VERIFY_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace wumkit {

/// Reference tables compiled into the library so that verification needs
/// nothing on disk.
namespace fixtures {
std::string_view sample_session();       // one enriched session row
std::string_view bounce_counts();        // session and pageview counts, shares
std::string_view client_attributes();    // attribute mix by bounce class (%)
std::string_view chi_square_reference(); // published statistic, p, dof
std::string_view reference_rules();      // rule report
}  // namespace fixtures

struct VerifyCheck {
  std::string group;  // sample_session, bounce, chi_square, rule_metrics
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool passed() const;
  std::size_t failures() const;
};

std::vector<VerifyCheck> verify_sample_session();
std::vector<VerifyCheck> verify_bounce_shares();
std::vector<VerifyCheck> verify_chi_square();
std::vector<VerifyCheck> verify_rule_metrics();

/// All of the above, in that order.
VerifyReport verify_reference_tables();

nlohmann::json to_json(const VerifyReport& report);

}  // namespace wumkit

#endif  // WUMKIT_VERIFY_HPP_
