#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gluedtrees {

// Raised on malformed or tampered input; carries the byte offset of the
// offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace gluedtrees
