#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fracdim {

/// A total map from the positive integers to {0, 1} choosing, per refinement
/// level, between the five-cell (0) and the eight-cell (1) subdivision.
///
/// Every schedule evaluates to 0 at n <= 0, so a run of ones starting at
/// level 1 counts as a run start.
class Schedule {
 public:
  enum class Kind { const0, const1, f_star, explicit_bits, shifted };

  static Schedule const0();
  static Schedule const1();
  /// 1 iff k(k^2 - 1) < n <= k^3 for some positive integer k.
  static Schedule f_star();
  /// bits[k - 1] is the value at level k; levels past the list evaluate to 0.
  static Schedule explicit_bits(std::vector<std::uint8_t> bits);
  /// k -> base(a + k).
  static Schedule shifted(const Schedule& base, std::int64_t a);

  /// Parses "const0", "const1", "fstar", "bits:0110" or "shift:<a>:<base>".
  static Schedule parse(std::string_view text);

  int operator()(std::int64_t n) const;

  Kind kind() const noexcept { return kind_; }
  std::string to_string() const;

  /// f(1..k) as a bit string, e.g. "1000".
  std::string window(std::int64_t k) const;

  friend bool operator==(const Schedule& lhs, const Schedule& rhs) { return lhs.to_string() == rhs.to_string(); }

 private:
  explicit Schedule(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::vector<std::uint8_t> bits_;
  std::shared_ptr<const Schedule> base_;
  std::int64_t shift_ = 0;
};

struct ScheduleStats {
  std::int64_t m1 = 0;  ///< #{k <= n : f(k) = 1}
  std::int64_t m2 = 0;  ///< #{k <= n : f(k) = 1, f(k - 1) = 0}
  std::optional<std::int64_t> l;  ///< max{m <= n : f(m) = 0}; empty when f == 1 on [1, n]
};

ScheduleStats schedule_stats(const Schedule& f, std::int64_t n);

/// max{m <= n : f(m) = 0}; throws InvalidArgument ("no-zero-entry") when absent.
std::int64_t last_zero(const Schedule& f, std::int64_t n);

}  // namespace fracdim
