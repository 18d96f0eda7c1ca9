#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "feigencert/driver.hpp"

namespace feigencert {

namespace {

constexpr std::string_view kMagic = "feigencert-checkpoint";
constexpr int kFormatVersion = 1;

std::uint32_t checksum(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

// Sign, exactly two integer digits, point, `scale` fractional digits.
std::string numeral(const FixedDec& x, Scale scale) {
  std::string digits = x.rescaled(scale).mantissa().get_str(10);
  if (digits.size() < scale + 2) digits.insert(0, scale + 2 - digits.size(), '0');
  std::string out(1, x.signum() < 0 ? '-' : '+');
  out.append(digits, 0, 2);
  out.push_back('.');
  out.append(digits, 2, std::string::npos);
  return out;
}

FixedDec parseNumeral(std::string_view line, Scale scale, std::size_t lineNo) {
  const bool shaped = line.size() == scale + 4 && (line[0] == '+' || line[0] == '-') &&
                      line[3] == '.';
  if (!shaped) {
    throw CheckpointError("checkpoint line " + std::to_string(lineNo) +
                          ": expected sign, two integer digits and " + std::to_string(scale) +
                          " fractional digits");
  }
  try {
    return FixedDec::parse(line);
  } catch (const std::invalid_argument& e) {
    throw CheckpointError("checkpoint line " + std::to_string(lineNo) + ": " + e.what());
  }
}

std::size_t parseField(std::string_view token, std::string_view key) {
  if (token.substr(0, key.size()) != key) {
    throw CheckpointError("checkpoint header: expected '" + std::string(key) + "'");
  }
  std::size_t value = 0;
  const std::string_view digits = token.substr(key.size());
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
    throw CheckpointError("checkpoint header: bad value for '" + std::string(key) + "'");
  }
  return value;
}

}  // namespace

std::string formatCheckpoint(const IterationState& s) {
  checkPropertyOne(s);
  const Scale scale = stateScale(s.m);
  std::ostringstream body;
  body << kMagic << ' ' << kFormatVersion << " m=" << s.m << " scale=" << scale
       << " count=" << stateCount(s.m) << '\n';
  body << numeral(s.coords.u(), scale) << '\n';
  for (const FixedDec& v : s.coords.nu()) body << numeral(v, scale) << '\n';
  std::string text = body.str();
  char crc[16];
  std::snprintf(crc, sizeof crc, "%08x", checksum(text));
  text += "crc32 ";
  text += crc;
  text += '\n';
  return text;
}

IterationState parseCheckpoint(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      throw CheckpointError("checkpoint: missing final newline");
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (lines.size() < 3) throw CheckpointError("checkpoint: truncated file");

  const std::string_view crcLine = lines.back();
  const std::size_t crcOffset = text.size() - crcLine.size() - 1;
  char expected[16];
  std::snprintf(expected, sizeof expected, "%08x", checksum(text.substr(0, crcOffset)));
  if (crcLine != "crc32 " + std::string(expected)) {
    throw CheckpointError("checkpoint: checksum mismatch");
  }

  std::istringstream header{std::string(lines[0])};
  std::string magic, version, mField, scaleField, countField, extra;
  header >> magic >> version >> mField >> scaleField >> countField;
  if (magic != kMagic || (header >> extra)) throw CheckpointError("checkpoint: bad header");
  if (version != std::to_string(kFormatVersion)) {
    throw CheckpointError("checkpoint: unsupported format version '" + version + "'");
  }
  const std::size_t m = parseField(mField, "m=");
  const std::size_t scale = parseField(scaleField, "scale=");
  const std::size_t count = parseField(countField, "count=");
  if (scale != stateScale(m) || count != stateCount(m)) {
    throw CheckpointError("checkpoint: scale/count do not match step " + std::to_string(m));
  }
  if (lines.size() != count + 2) {
    throw CheckpointError("checkpoint: expected " + std::to_string(count) + " coefficients, found " +
                          std::to_string(lines.size() - 2));
  }

  FixedDec u = parseNumeral(lines[1], scale, 2);
  std::vector<FixedDec> nu;
  nu.reserve(count - 1);
  for (std::size_t i = 2; i < lines.size() - 1; ++i) nu.push_back(parseNumeral(lines[i], scale, i + 1));
  IterationState s{m, LanfordCoords(std::move(u), std::move(nu))};
  try {
    checkPropertyOne(s);
  } catch (const std::logic_error& e) {
    throw CheckpointError(std::string("checkpoint: ") + e.what());
  }
  return s;
}

void saveCheckpoint(const IterationState& s, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    out << formatCheckpoint(s);
    if (!out) throw std::runtime_error("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

IterationState loadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parseCheckpoint(buffer.str());
}

}  // namespace feigencert
