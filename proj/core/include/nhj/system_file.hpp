#pragma once

#include <string>
#include <string_view>

#include "nhj/system.hpp"

namespace nhj {

// User-defined systems in a JSON document (schema in docs/system-file.md):
//
//   {
//     "name": "particle",
//     "dimension": 3,
//     "metric": "euclidean",             // or an n x n array of expressions
//     "potential": "q3",
//     "frame": [["1", "0", "q2"], ["0", "1", "0"]],
//     "coordinates": [{"periodic": false, "lower": -5, "upper": 5}, ...]
//   }
//
// Entries are expression strings (see Expression) or plain numbers.
// Derivatives are taken by fourth-order central differences.
SystemDefinition parse_system_definition(std::string_view json_text);

/// Reads and parses a system file; throws ParseError on I/O or schema errors.
SystemDefinition load_system_file(const std::string& path);

}  // namespace nhj
