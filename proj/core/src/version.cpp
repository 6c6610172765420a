#include "sdns/types.hpp"

#ifndef SDNS_VERSION
#define SDNS_VERSION "0.0.0"
#endif
#ifndef SDNS_GIT_REV
#define SDNS_GIT_REV "unknown"
#endif

namespace sdns {

const std::string& version() {
  static const std::string v = std::string(SDNS_VERSION) + "+" SDNS_GIT_REV;
  return v;
}

}  // namespace sdns
