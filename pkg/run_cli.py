#!/usr/bin/env python3
"""Convenience script to run the CLI from a checkout."""

import sys

from entlinks.main import main

if __name__ == "__main__":
    sys.exit(main())
