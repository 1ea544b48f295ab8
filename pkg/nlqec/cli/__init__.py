from .main import check, cli, recover, sweep

__all__ = ["check", "cli", "recover", "sweep"]
