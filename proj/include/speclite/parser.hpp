#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "speclite/ast.hpp"

namespace speclite {

/// First syntax error in a source text, with the offending position.
class ParseError : public std::runtime_error {
 public:
  ParseError(Span span, const std::string& message)
      : std::runtime_error(span.to_string() + ": " + message), span_(std::move(span)),
        message_(message) {}

  const Span& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  Span span_;
  std::string message_;
};

/// Parses an annotated interface: `type`, `val` and `exception` declarations,
/// each optionally followed by `(*@ ... *)` spec comments, plus standalone
/// `predicate` / `function` spec comments.
SpecInterface parse_interface(std::string_view source, std::string file = {});

/// Parses a single spec term (the contents of a clause).
TermPtr parse_term(std::string_view source, std::string file = {});

/// Parses a logical type expression such as `('a * 'b) list`.
LogicalType parse_type(std::string_view source, std::string file = {});

}  // namespace speclite
