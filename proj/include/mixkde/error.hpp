#pragma once

#include <stdexcept>
#include <string>

namespace mixkde {

//! Base class of every error raised by the library.
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! An argument lies outside the mathematical domain of an operation (e.g. p < 1).
class domain_error : public error
{
public:
  using error::error;
};

//! A field produced a non-finite value during quadrature.
class evaluation_error : public error
{
public:
  using error::error;
};

class unsupported_order : public error
{
public:
  using error::error;
};

class dimension_error : public error
{
public:
  using error::error;
};

class parameter_error : public error
{
public:
  using error::error;
};

//! No admissible lower-bound family exists for the requested (n, r, p, ...).
class infeasible_parameters : public error
{
public:
  using error::error;
};

//! The requested experiment falls outside the regime covered by the theory.
class regime_error : public error
{
public:
  using error::error;
};

class sampler_degenerate : public error
{
public:
  using error::error;
};

class construction_error : public error
{
public:
  using error::error;
};

} // namespace mixkde
