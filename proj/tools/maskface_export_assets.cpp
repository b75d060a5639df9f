// Copyright 2026 the maskface authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Dumps the built-in mask template library to a directory so it can be
// inspected, edited and fed back through `maskface --assets DIR`.

#include <iostream>

#include "maskface/errors.hpp"
#include "maskface/maskwarp.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: maskface-export-assets OUTPUT_DIR\n";
    return 2;
  }
  try {
    maskface::MaskLibrary::builtin().save(argv[1]);
  } catch (const maskface::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const maskface::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "wrote built-in assets to '" << argv[1] << "'\n";
  return 0;
}
