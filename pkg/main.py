#!/usr/bin/env python3
"""
CoDEA - Main entry point for the optimizer and experiment harness.
"""
import sys
from pathlib import Path

# Add the project root to the path
sys.path.insert(0, str(Path(__file__).parent))

from codea.harness.cli import main


if __name__ == "__main__":
    sys.exit(main())
