import os

PATTERN = "test_*.py"


def load_tests(loader, tests, pattern):
    tests_dir = os.path.dirname(os.path.abspath(__file__))
    tests.addTests(loader.discover(tests_dir, PATTERN))
    return tests
