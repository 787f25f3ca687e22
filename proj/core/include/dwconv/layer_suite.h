// Copyright 2026 The dwconv Authors. All Rights Reserved.
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

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "dwconv/geometry.h"

namespace dwconv {

struct LayerConfig {
  std::string name;
  ConvGeometry geometry;
  std::string source;
};

// Distinct 3x3 depthwise layers of MobileNetV1 and MobileNetV2 at 224x224
// input, batch 1, padding 1 on every side. Labels are "v1" and "v2".
std::vector<LayerConfig> mobilenet_layer_suite();

// Layer file format, one layer per line:
//   name,N,C,Hi,Wi,Hf,Wf,s,pt,pb,pl,pr
// Lines starting with '#' and blank lines are ignored. Throws ParseError
// carrying the 1-based line number.
std::vector<LayerConfig> parse_layer_config(std::istream& in,
                                            const std::string& source = "file");
std::vector<LayerConfig> load_layer_config(const std::filesystem::path& path);

std::string format_layer_config(const std::vector<LayerConfig>& layers);

}  // namespace dwconv
