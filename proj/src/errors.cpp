#include "codec/errors.hpp"

namespace codec {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ingestion: return "ingestion";
    case ErrorKind::schema: return "schema";
    case ErrorKind::size: return "size";
    case ErrorKind::argument: return "argument";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::constant_response: return "constant_response";
    case ErrorKind::enumeration_guard: return "enumeration_guard";
  }
  return "unknown";
}

}  // namespace codec
