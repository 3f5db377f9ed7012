# -*- coding: utf-8 -*-
"""Where loopci looks for its profile and its bundled example files."""
import os

PKG_PATH = os.path.dirname(os.path.abspath(__file__))
DATA_PATH = os.path.join(PKG_PATH, "data")

CONFIG_PATH = os.path.join(os.path.expanduser('~/.config/loopci'), 'configs')

DATA_SUFFIXES = ('.graph', '.model', '.problem')


def config(*fname):
    return os.path.join(CONFIG_PATH, *fname)


def data(*fname):
    return os.path.join(DATA_PATH, *fname)


def examples():
    """Names of the bundled example files, sorted."""
    return sorted(
        name for name in os.listdir(DATA_PATH) if name.endswith(DATA_SUFFIXES)
    )
