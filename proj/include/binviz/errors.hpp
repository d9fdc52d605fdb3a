#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace binviz {

// Base of every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingFile : Error {
  explicit MissingFile(const std::string& path) : Error("missing file: " + path) {}
};

struct IoError : Error {
  using Error::Error;
};

struct ParseError : Error {
  std::size_t line;
  ParseError(std::size_t line_no, const std::string& what)
      : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

struct EmptyManifest : Error { EmptyManifest() : Error("empty manifest") {} };
struct EmptyStream : Error { EmptyStream() : Error("empty byte stream") {} };
struct EmptyBlock : Error { EmptyBlock() : Error("empty block") {} };
struct EmptySequence : Error { EmptySequence() : Error("empty pixel sequence") {} };
struct EmptyList : Error { EmptyList() : Error("empty image list") {} };
struct EmptyDataset : Error { EmptyDataset() : Error("empty dataset") {} };
struct EmptyTrainSet : Error { EmptyTrainSet() : Error("empty training set") {} };

struct IndexOutOfRange : Error { using Error::Error; };
struct CoordOutOfRange : Error { using Error::Error; };
struct UnsupportedCut : Error {
  explicit UnsupportedCut(int cut) : Error("unsupported cut: " + std::to_string(cut)) {}
};
struct ProfileMismatch : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct DimMismatch : Error { using Error::Error; };
struct OddSpatialDim : Error { using Error::Error; };
struct BadConfig : Error { using Error::Error; };
struct MissingClass : Error { using Error::Error; };

struct BadMagic : Error { BadMagic() : Error("bad model magic") {} };
struct ShapeHeaderMismatch : Error { using Error::Error; };
struct DivergenceDetected : Error {
  DivergenceDetected() : Error("training diverged: loss is not finite") {}
};

}  // namespace binviz
