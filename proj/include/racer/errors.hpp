#ifndef RACER_ERRORS_HPP
#define RACER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace racer {

// Base class for all errors raised by the library. The CLI maps the
// concrete type to a process exit category.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidWidth : public Error {
 public:
  explicit InvalidWidth(const std::string& msg) : Error(msg) {}
};

class SelfIntersectingTrack : public Error {
 public:
  explicit SelfIntersectingTrack(const std::string& msg) : Error(msg) {}
};

class OffTrackQuery : public Error {
 public:
  explicit OffTrackQuery(const std::string& msg) : Error(msg) {}
};

class IndivisibleRayCount : public Error {
 public:
  explicit IndivisibleRayCount(const std::string& msg) : Error(msg) {}
};

class SpawnConflict : public Error {
 public:
  explicit SpawnConflict(const std::string& msg) : Error(msg) {}
};

class SteppedDoneEpisode : public Error {
 public:
  explicit SteppedDoneEpisode(const std::string& msg) : Error(msg) {}
};

class BufferTooSmall : public Error {
 public:
  explicit BufferTooSmall(const std::string& msg) : Error(msg) {}
};

class CorruptCheckpoint : public Error {
 public:
  explicit CorruptCheckpoint(const std::string& msg) : Error(msg) {}
};

class IncompatibleCheckpoint : public Error {
 public:
  explicit IncompatibleCheckpoint(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace racer

#endif  // RACER_ERRORS_HPP
