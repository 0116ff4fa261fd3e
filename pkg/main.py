"""
Main entry point for the CHAOS trainer.
"""
import sys

from cli.main import run


def main():
    """Main entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()
