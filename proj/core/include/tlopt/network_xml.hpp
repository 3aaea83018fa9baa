#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "tlopt/netmodel.hpp"

namespace tlopt::net {

enum class ParseErrorKind {
  MalformedXml,
  UnknownElement,
  UnknownReference,
  DuplicateId,
  MissingLane,
  InvalidAttribute,
  InvalidStructure,
};

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, long line, std::string element, const std::string& detail);

  ParseErrorKind kind() const { return kind_; }
  /// 1-based source line, 0 when unknown.
  long line() const { return line_; }
  const std::string& element() const { return element_; }

 private:
  ParseErrorKind kind_;
  long line_;
  std::string element_;
};

/// Parses the network XML vocabulary:
///
///   <network>
///     <junction id x y/>
///     <road id from to length spawn_rate?/>
///     <lane id road/>
///     <trajectory id junction in out length/>
///     <conflict a b/>
///     <track id in trajectory out/>
///   </network>
///
/// Unknown elements or attributes are errors. The result is checked with
/// validate_network and the first violation is reported as a ParseError, so
/// every accepted document yields a valid network.
RoadNetwork parse_network(std::string_view document);

/// Canonical form: entities grouped by kind in the order above, attributes in
/// the order above, numbers in shortest round-trip form.
/// Same document checks as parse_network but without validate_network, so
/// callers can report every structural violation themselves.
RoadNetwork parse_network_unchecked(std::string_view document);

std::string serialize_network(const RoadNetwork& net);

}  // namespace tlopt::net
