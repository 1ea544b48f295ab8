from test.test_cli import test_check_scenario
from test.test_scenarios import test_check_coherent_loss, test_recover_fixed_phase

if __name__ == "__main__":
    from pathlib import Path
    from tempfile import TemporaryDirectory

    from click.testing import CliRunner

    test_check_coherent_loss()
    test_recover_fixed_phase()
    with TemporaryDirectory() as tmp:
        test_check_scenario(CliRunner(), Path(tmp))
