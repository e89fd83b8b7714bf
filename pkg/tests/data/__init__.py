import os

DATA_DIR = os.path.dirname(os.path.abspath(__file__))


def data_path(name):
    return os.path.join(DATA_DIR, name)
