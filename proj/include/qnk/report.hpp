/**
 * This code is part of the QNK workbench.
 *
 * (C) Copyright The QNK Workbench Authors 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * Any modifications or derivative works of this code must retain this
 * copyright notice, and modified files need to carry a notice indicating
 * that they have been altered from the originals.
 */

#pragma once

// Report serialization. Objects keep insertion order; floating-point values
// are written with 17 significant digits so they round-trip exactly.

#include <string>
#include <vector>

#include "json.hpp"

namespace qnk::report {

// indent < 0 writes a single line.
std::string serialize(const nlohmann::ordered_json& value, int indent = -1);

// Single JSON document, pretty-printed, newline-terminated. "-" is stdout.
// Throws IoError when the path cannot be written.
void write_json(const std::string& path, const nlohmann::ordered_json& document);
// One compact record per line.
void write_jsonl(const std::string& path, const std::vector<nlohmann::ordered_json>& records);

}  // namespace qnk::report
