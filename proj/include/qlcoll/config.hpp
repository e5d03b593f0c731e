#pragma once

#include "qlcoll/analysis.hpp"

#include <iosfwd>
#include <string>

namespace qlcoll {

/// Raised for malformed configs; what() carries "<source>:<line>: <message>".
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Parses the flat `key = value` format described in docs/formats.md.
/// `[section]` headers prefix the keys that follow with "section.".
StudyConfig parse_study_config(std::istream& is, const std::string& source = "config");
StudyConfig load_study_config(const std::string& path);

}  // namespace qlcoll
