import os


def load_tests(loader, standard_tests, pattern):
    this_dir = os.path.dirname(os.path.abspath(__file__))
    package_tests = loader.discover(start_dir=this_dir, pattern='*_test.py',
                                    top_level_dir=os.path.dirname(os.path.dirname(this_dir)))
    standard_tests.addTests(package_tests)
    return standard_tests
