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
// Embedding-set serialization. All multibyte values little-endian
// regardless of host order.

#include <cstdio>
#include <cstring>
#include <fstream>

#include "maskface/csv.hpp"
#include "maskface/embed.hpp"
#include "maskface/errors.hpp"

namespace maskface {

namespace {

constexpr char kMagic[4] = {'M', 'F', 'E', 'B'};
constexpr std::uint32_t kVersion = 1;
// guards against nonsense lengths in corrupt files
constexpr std::uint32_t kMaxStringLen = 1u << 20;

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {
      static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
      static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  put_u32(out, static_cast<std::uint32_t>(v & 0xffffffffu));
  put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

void put_f32(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

void put_string(std::ostream& out, const std::string& s) {
  if (s.size() > kMaxStringLen) {
    throw ValidationError("embedding label longer than 1 MiB");
  }
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class Reader {
 public:
  Reader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  std::uint32_t u32() {
    unsigned char bytes[4];
    read(bytes, 4);
    return static_cast<std::uint32_t>(bytes[0]) |
           (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
  }

  std::uint64_t u64() {
    const std::uint64_t lo = u32();
    const std::uint64_t hi = u32();
    return lo | (hi << 32);
  }

  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  std::uint8_t u8() {
    unsigned char b;
    read(&b, 1);
    return b;
  }

  std::string string() {
    const std::uint32_t len = u32();
    if (len > kMaxStringLen) {
      throw ParseError("'" + name_ + "': string length " + std::to_string(len) +
                       " exceeds the 1 MiB cap");
    }
    std::string s(len, '\0');
    read(s.data(), len);
    return s;
  }

  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

 private:
  void read(void* dst, std::size_t bytes) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(bytes));
    if (in_.gcount() != static_cast<std::streamsize>(bytes)) {
      throw ParseError("'" + name_ + "': truncated embedding set file");
    }
  }

  std::istream& in_;
  std::string name_;
};

}  // namespace

void write_embeddings(const std::filesystem::path& path,
                      std::span<const Embedding> embeddings) {
  const std::size_t dim = embeddings.empty() ? 0 : embeddings.front().vector.size();
  for (const Embedding& e : embeddings) {
    validate(e, dim);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(dim));
  put_u64(out, embeddings.size());
  for (const Embedding& e : embeddings) {
    put_string(out, e.identity);
    put_string(out, e.source);
    out.put(e.masked ? '\x01' : '\x00');
    for (double v : e.vector) {
      put_f32(out, static_cast<float>(v));
    }
  }
  out.flush();
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

std::vector<Embedding> read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  Reader r(in, path.string());
  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8());
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw ParseError("'" + path.string() + "': not an embedding set file");
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw ParseError("'" + path.string() + "': unsupported version " +
                     std::to_string(version));
  }
  const std::uint32_t dim = r.u32();
  const std::uint64_t count = r.u64();
  std::vector<Embedding> embeddings;
  embeddings.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Embedding e;
    e.identity = r.string();
    e.source = r.string();
    const std::uint8_t masked = r.u8();
    if (masked > 1) {
      throw ParseError("'" + path.string() + "': record " + std::to_string(i) +
                       ": masked flag must be 0 or 1");
    }
    e.masked = masked == 1;
    e.vector.resize(dim);
    for (std::uint32_t j = 0; j < dim; ++j) {
      e.vector[j] = static_cast<double>(r.f32());
    }
    validate(e, dim);
    embeddings.push_back(std::move(e));
  }
  if (!r.at_eof()) {
    throw ParseError("'" + path.string() + "': trailing data after last record");
  }
  return embeddings;
}

void write_embeddings_csv(std::ostream& out, std::span<const Embedding> embeddings) {
  const std::size_t dim = embeddings.empty() ? 0 : embeddings.front().vector.size();
  for (const Embedding& e : embeddings) {
    validate(e, dim);
  }
  out << "identity,source,masked";
  for (std::size_t j = 0; j < dim; ++j) {
    out << ",v" << j;
  }
  out << '\n';
  char buf[40];
  for (const Embedding& e : embeddings) {
    out << csv_escape(e.identity) << ',' << csv_escape(e.source) << ','
        << (e.masked ? 1 : 0);
    for (double v : e.vector) {
      std::snprintf(buf, sizeof buf, "%.9g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

void write_train_samples_csv(std::ostream& out, std::span<const TrainSample> samples) {
  const std::size_t dim = samples.empty() ? 0 : samples.front().input.size();
  out << "identity,source";
  for (std::size_t j = 0; j < dim; ++j) {
    out << ",x" << j;
  }
  out << '\n';
  char buf[40];
  for (const TrainSample& s : samples) {
    if (s.input.size() != dim) {
      throw ValidationError("sample '" + s.source + "': dimension " +
                            std::to_string(s.input.size()) + ", expected " +
                            std::to_string(dim));
    }
    out << csv_escape(s.identity) << ',' << csv_escape(s.source);
    for (double v : s.input) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

std::vector<TrainSample> read_train_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  const auto strip_cr = [](std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("'" + path.string() + "': empty sample file");
  }
  strip_cr(line);
  const std::vector<std::string> header = csv_split(line);
  if (header.size() < 3 || header[0] != "identity" || header[1] != "source") {
    throw ParseError("'" + path.string() +
                     "': expected header identity,source,x0,...");
  }
  const std::size_t dim = header.size() - 2;
  std::vector<TrainSample> samples;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const std::string where = "'" + path.string() + "' line " + std::to_string(lineno);
    try {
      const std::vector<std::string> fields = csv_split(line);
      if (fields.size() != header.size()) {
        throw ParseError("expected " + std::to_string(header.size()) +
                         " fields, got " + std::to_string(fields.size()));
      }
      TrainSample s;
      s.identity = fields[0];
      s.source = fields[1];
      s.input.resize(dim);
      for (std::size_t j = 0; j < dim; ++j) {
        std::size_t used = 0;
        s.input[j] = std::stod(fields[j + 2], &used);
        if (used != fields[j + 2].size()) {
          throw ParseError("malformed number '" + fields[j + 2] + "'");
        }
      }
      samples.push_back(std::move(s));
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    } catch (const std::exception&) {
      throw ParseError(where + ": malformed numeric field");
    }
  }
  return samples;
}

}  // namespace maskface
