/*
 * Copyright 2026 The ddrc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace ddrc {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A mode-register or config field holds a value with no encoding.
class InvalidField : public Error
{
public:
    explicit InvalidField(std::string field)
        : Error("invalid field: " + field), field_(std::move(field))
    {
    }
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class UnknownCommand : public Error
{
public:
    using Error::Error;
};

class AddressOutOfRange : public Error
{
public:
    using Error::Error;
};

class MalformedStream : public Error
{
public:
    using Error::Error;
};

class ConfigError : public Error
{
public:
    ConfigError(const std::string& key, int line, const std::string& what)
        : Error(line > 0 ? "config line " + std::to_string(line) + " (" + key + "): " + what
                         : "config (" + key + "): " + what),
          key_(key), line_(line)
    {
    }
    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    std::string key_;
    int line_;
};

class TraceFormatError : public Error
{
public:
    TraceFormatError(int line, const std::string& what)
        : Error("trace line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace ddrc
