// Copyright 2026 The lgc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace lgc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lgc
