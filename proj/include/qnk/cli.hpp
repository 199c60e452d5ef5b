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

#include <iosfwd>
#include <string>
#include <vector>

namespace qnk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitAbort = 2;

// `args` excludes the program name. Human-readable messages go to `out` and
// `err`; reports go to the files named by the flags ("-" for stdout).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qnk::cli
