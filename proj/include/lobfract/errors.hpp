#pragma once

#include <stdexcept>
#include <string>

namespace lobfract {

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// event_ingest
class MalformedLine : public Error {
  public:
    using Error::Error;
};
class NonMonotoneTimestamp : public Error {
  public:
    using Error::Error;
};
class DuplicateAdd : public Error {
  public:
    using Error::Error;
};
class TruncatedRecord : public Error {
  public:
    using Error::Error;
};
class BadMagic : public Error {
  public:
    using Error::Error;
};

// book_engine
class UnknownOrder : public Error {
  public:
    using Error::Error;
};
class Overfill : public Error {
  public:
    using Error::Error;
};
class CrossedBook : public Error {
  public:
    using Error::Error;
};

// duration_extract
class MixedKey : public Error {
  public:
    using Error::Error;
};

// dfa_core
class EmptySeries : public Error {
  public:
    using Error::Error;
};
class ScaleTooLarge : public Error {
  public:
    using Error::Error;
};
class ScaleTooSmall : public Error {
  public:
    using Error::Error;
};
class InsufficientPoints : public Error {
  public:
    using Error::Error;
};
class ZeroFluctuationInRange : public Error {
  public:
    using Error::Error;
};
class MissingNormalization : public Error {
  public:
    using Error::Error;
};
class SeriesTooShort : public Error {
  public:
    using Error::Error;
};
class InsufficientData : public Error {
  public:
    using Error::Error;
};

// synth_signals
class EmbeddingFailure : public Error {
  public:
    using Error::Error;
};
class InvalidShapeParams : public Error {
  public:
    using Error::Error;
};

// econ_metrics
class EmptyDay : public Error {
  public:
    using Error::Error;
};
class InsufficientPath : public Error {
  public:
    using Error::Error;
};
class ZeroVariance : public Error {
  public:
    using Error::Error;
};

// cli_report
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace lobfract
