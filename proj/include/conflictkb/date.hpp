#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace conflictkb {

/// Calendar day, written as ISO-8601 YYYY-MM-DD.
class Date {
 public:
  constexpr Date() noexcept = default;
  constexpr explicit Date(std::chrono::sys_days days) noexcept : days_(days) {}

  /// Strict YYYY-MM-DD; nullopt for anything else, including invalid days
  /// such as 2023-02-29.
  static std::optional<Date> parse(std::string_view text);

  [[nodiscard]] constexpr std::chrono::sys_days days() const noexcept {
    return days_;
  }
  [[nodiscard]] std::string to_string() const;

  friend constexpr auto operator<=>(Date, Date) noexcept = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace conflictkb
