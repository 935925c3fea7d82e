// Copyright (c) 2026 The spcx Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "image.h"

namespace spcx {

// 8-bit grayscale or RGB PNG only. Values map as byte / 255 on load and
// round(clamp(v) * 255) on save.
Image load_png(const std::string& path);
void save_png(const Image& img, const std::string& path);

}  // namespace spcx
