#pragma once

#include <functional>
#include <iostream>
#include <string>

namespace rotspec {

// Warnings flag validity-domain issues that are deliberately not hard errors
// (e.g. evaluation beyond the model's approximation range). The sink is
// swappable so embedders and tests can capture or silence them.
using WarnHandler = std::function<void(const std::string&)>;

inline WarnHandler& warn_handler() {
  static WarnHandler handler = [](const std::string& msg) {
    std::cerr << "rotspec: warning: " << msg << '\n';
  };
  return handler;
}

inline void warn(const std::string& msg) {
  if (warn_handler()) warn_handler()(msg);
}

}  // namespace rotspec
