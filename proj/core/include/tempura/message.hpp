#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tempura {

enum class Role { System, User, Assistant };

struct Message {
  Role role = Role::User;
  std::string text;

  friend bool operator==(const Message&, const Message&) = default;
};

std::string_view role_name(Role role);
Role role_from_name(std::string_view name);

}  // namespace tempura
