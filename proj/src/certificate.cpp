#include "fno/certificate.hpp"

namespace fno {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Verified: return "Verified";
    case Status::Refuted: return "Refuted";
    case Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

}  // namespace fno
