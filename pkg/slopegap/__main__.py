"""Allow running as python -m slopegap."""

from slopegap.cli import main

main()
