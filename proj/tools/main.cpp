// Copyright 2026 The cmeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "cmeval/cli.hpp"

int main(int argc, char** argv) { return cmeval::cli::run(argc, argv); }
