#!/usr/bin/env python3
"""
galois-sieve - experiment runner (entry point)
Usage: python app.py <duke|blcount|tx|equidist|derangement|sieve> [options]
"""

import sys

from src.cli.app import main

if __name__ == "__main__":
    sys.exit(main())
