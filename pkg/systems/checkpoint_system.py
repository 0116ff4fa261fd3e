"""
Checkpoint system for the CHAOS engine.
Serializes the weights and the report once per epoch.
"""
from engine.checkpoint import save_checkpoint
from engine.system import PhaseSystem
from utils.debug import debug_print


class CheckpointSystem(PhaseSystem):
    """
    Phase system writing `checkpoint.bin` and `report.csv` into the output directory.
    Does nothing when the session has no output directory.
    """

    def __init__(self):
        super().__init__("Checkpoint", priority=30)
        self.writes = 0

    def update(self, context, epoch: int) -> None:
        if context.out_dir is None:
            return
        context.out_dir.mkdir(parents=True, exist_ok=True)
        save_checkpoint(context.checkpoint_path, context.weights, context.config, epoch + 1)
        # report rows so far plus the epoch in progress
        context.report_with_current().write_csv(context.report_path)
        self.writes += 1
        debug_print("Checkpoint", f"epoch {epoch}: wrote {context.checkpoint_path.name} "
                                  f"and {context.report_path.name}")
