# -*- coding: utf-8 -*-
"""
These functions "walk" the profile by key path and return the configured
value, or a default when the key is absent.

The profile only holds defaults for the audits (query depth, sample sizes,
generator bounds). Every value has a built-in default, so a missing profile
file is not an error.
"""
import logging
import yaml
from loopci import paths

_profile = {}
_profile_read = False
_args = {}
profile_file = ""


class ProfileError(Exception):
    pass


# Store an argument in a static location so it is
# available to every module
def set_arg(name, value):
    global _args
    _args.update({name: value})


# Retrieve an argument. Return None if the
# argument is not set.
def get_arg(name, default=None):
    value = default
    if (name in _args.keys()):
        value = _args[name]
    return value


def set_profile(custom_profile):
    """
    Set the profile to a custom value. This is especially helpful when testing
    """
    global _profile, _profile_read
    _profile = custom_profile
    _profile_read = True


def reset_profile():
    """
    Forget whatever profile was loaded or injected, so the next lookup reads
    the profile file again.
    """
    global _profile, _profile_read
    _profile = {}
    _profile_read = False


def get_profile(command=""):
    global _profile, _profile_read, profile_file
    _logger = logging.getLogger(__name__)
    command = command.strip().lower()
    if command == "reload":
        _profile_read = False
    elif command != "":
        raise ValueError("command '{}' not understood".format(command))
    if not _profile_read:
        # An explicit --profile argument wins over the default location
        profile_file = get_arg("profile_file") or paths.config('profile.yml')
        try:
            with open(profile_file, "r") as f:
                _profile = yaml.safe_load(f) or {}
        except (IOError, FileNotFoundError):
            if get_arg("profile_file"):
                _logger.error("Profile file {} not found".format(profile_file))
                raise ProfileError(
                    "profile file '{}' not found".format(profile_file)
                )
            _logger.debug(
                "{} is missing, using built-in defaults".format(profile_file)
            )
            _profile = {}
        except yaml.YAMLError as e:
            message = " ".join(str(e).split())
            _logger.error("Unable to parse config file: {}".format(message))
            raise ProfileError("{}: {}".format(profile_file, message))
        if not isinstance(_profile, dict):
            raise ProfileError(
                "{}: top level of the profile must be a mapping".format(
                    profile_file
                )
            )
        _profile_read = True
    return _profile


def get(path, default=None):
    return get_profile_var(path, default)


def get_profile_var(path, default=None):
    """
    Get a value from the profile, whether it exists or not
    If the value does not exist in the profile, returns
    either the default value (if there is one) or None.
    """
    if (isinstance(path, str)):
        path = [path]
    response = _walk_profile(path)
    if response is None:
        response = default
    return response


def get_int(path, default):
    """
    Same as get, but the value must be a non-negative integer.
    """
    value = get_profile_var(path, default)
    try:
        value = int(value)
    except (TypeError, ValueError):
        raise ProfileError(
            "profile value {} must be an integer, got '{}'".format(
                ".".join(path), value
            )
        )
    if value < 0:
        raise ProfileError(
            "profile value {} must not be negative".format(".".join(path))
        )
    return value


def get_profile_flag(path, default=None):
    """
    Get a boolean value from the profile, whether it exists
    or not. If the value does not exist, returns default or
    None
    """
    if (isinstance(path, str)):
        path = [path]
    temp = _walk_profile(path)
    if (temp is None):
        # the variable is not defined
        temp = default
    response = False
    if str(temp).strip().lower() in ('true', 'yes', 'on', 'enabled'):
        response = True
    return response


def _walk_profile(path):
    """
    Function to walk the profile. Returns None for a missing key.
    """
    if (isinstance(path, str)):
        path = [path]
    profile = get_profile()
    for branch in path:
        try:
            if (not isinstance(profile, dict)):
                profile = {}
            profile = profile[branch]
        except KeyError:
            profile = None
            break
    return profile
