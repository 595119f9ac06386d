#include "fracdim/schedule.hpp"

#include <charconv>

#include "fracdim/errors.hpp"

namespace fracdim {

Schedule Schedule::const0() { return Schedule(Kind::const0); }
Schedule Schedule::const1() { return Schedule(Kind::const1); }
Schedule Schedule::f_star() { return Schedule(Kind::f_star); }

Schedule Schedule::explicit_bits(std::vector<std::uint8_t> bits) {
  for (auto b : bits)
    if (b > 1) throw InvalidArgument("schedule bits must be 0 or 1");
  Schedule s(Kind::explicit_bits);
  s.bits_ = std::move(bits);
  return s;
}

Schedule Schedule::shifted(const Schedule& base, std::int64_t a) {
  if (a < 0) throw InvalidArgument("schedule shift must be non-negative");
  Schedule s(Kind::shifted);
  s.base_ = std::make_shared<const Schedule>(base);
  s.shift_ = a;
  return s;
}

namespace {

bool f_star_value(std::int64_t n) {
  std::int64_t k = 1;
  while (k * k * k < n) ++k;
  return n > k * k * k - k;
}

std::int64_t parse_int(std::string_view text) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw InvalidArgument("malformed integer in schedule: '" + std::string(text) + "'");
  return value;
}

}  // namespace

int Schedule::operator()(std::int64_t n) const {
  if (n <= 0) return 0;
  switch (kind_) {
    case Kind::const0:
      return 0;
    case Kind::const1:
      return 1;
    case Kind::f_star:
      return f_star_value(n) ? 1 : 0;
    case Kind::explicit_bits:
      return static_cast<std::size_t>(n) <= bits_.size() ? bits_[static_cast<std::size_t>(n - 1)] : 0;
    case Kind::shifted:
      return (*base_)(shift_ + n);
  }
  return 0;
}

std::string Schedule::to_string() const {
  switch (kind_) {
    case Kind::const0:
      return "const0";
    case Kind::const1:
      return "const1";
    case Kind::f_star:
      return "fstar";
    case Kind::explicit_bits: {
      std::string out = "bits:";
      for (auto b : bits_) out.push_back(b ? '1' : '0');
      return out;
    }
    case Kind::shifted:
      return "shift:" + std::to_string(shift_) + ":" + base_->to_string();
  }
  return {};
}

std::string Schedule::window(std::int64_t k) const {
  std::string out;
  for (std::int64_t i = 1; i <= k; ++i) out.push_back((*this)(i) ? '1' : '0');
  return out;
}

Schedule Schedule::parse(std::string_view text) {
  if (text == "const0") return const0();
  if (text == "const1") return const1();
  if (text == "fstar") return f_star();
  if (text.starts_with("bits:")) {
    std::vector<std::uint8_t> bits;
    for (char c : text.substr(5)) {
      if (c != '0' && c != '1') throw InvalidArgument("malformed schedule bits: '" + std::string(text) + "'");
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (bits.empty()) throw InvalidArgument("empty schedule bit list");
    return explicit_bits(std::move(bits));
  }
  if (text.starts_with("shift:")) {
    const auto rest = text.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw InvalidArgument("malformed shifted schedule: '" + std::string(text) + "'");
    return shifted(parse(rest.substr(colon + 1)), parse_int(rest.substr(0, colon)));
  }
  throw InvalidArgument("unknown schedule '" + std::string(text) + "'");
}

ScheduleStats schedule_stats(const Schedule& f, std::int64_t n) {
  if (n < 1) throw InvalidArgument("schedule statistics need n >= 1");
  ScheduleStats stats;
  for (std::int64_t k = 1; k <= n; ++k) {
    if (f(k) == 1) {
      ++stats.m1;
      if (f(k - 1) == 0) ++stats.m2;
    } else {
      stats.l = k;
    }
  }
  return stats;
}

std::int64_t last_zero(const Schedule& f, std::int64_t n) {
  const auto stats = schedule_stats(f, n);
  if (!stats.l) throw InvalidArgument("no-zero-entry: schedule is 1 on [1, " + std::to_string(n) + "]");
  return *stats.l;
}

}  // namespace fracdim
