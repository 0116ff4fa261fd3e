"""
Debug utilities for tracking phase execution and worker activity.
"""
import os
import sys

# Flag to enable/disable debug output
DEBUG_ENABLED = os.environ.get("CHAOS_DEBUG", "0").lower() in ("1", "true", "yes", "on")


def set_debug(enabled: bool) -> None:
    """Switch debug output on or off at runtime"""
    global DEBUG_ENABLED
    DEBUG_ENABLED = enabled


def debug_print(system_name: str, message: str) -> None:
    """
    Print a debug message if debugging is enabled

    Args:
        system_name: Name of the system printing the message
        message: Debug message to print
    """
    if DEBUG_ENABLED:
        print(f"[DEBUG:{system_name}] {message}", file=sys.stderr)
