/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef UORA_ERRORS_H
#define UORA_ERRORS_H

#include <stdexcept>

namespace uora
{

/// Invalid or unsupported configuration, raised before any event runs.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Byte input that does not parse as a valid element or frame.
class MalformedFrameError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace uora

#endif /* UORA_ERRORS_H */
