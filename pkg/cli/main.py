"""
Command-line dispatch and exit codes.
"""
import sys
from typing import Optional, Sequence

from cli.commands import cmd_bench, cmd_model, cmd_train
from cli.run_config import resolve_run_config
from utils.debug import set_debug
from utils.errors import ChaosError, EXIT_OK, EXIT_RUNTIME
from utils.message_queue import set_quiet

COMMANDS = {
    "train": cmd_train,
    "bench": cmd_bench,
    "model": cmd_model,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command

    Returns:
        0 on success, 1 for usage errors, 2 for data errors, 3 for runtime errors
    """
    try:
        cfg = resolve_run_config(argv)
        set_debug(bool(cfg.debug))
        set_quiet(cfg.quiet)
        COMMANDS[cfg.command](cfg)
    except ChaosError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        print(f"error: unexpected {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK
