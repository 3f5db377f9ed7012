# -*- coding: utf-8 -*-
import sys
import logging
from . import commandline


def main(args=None):
    parser = commandline.build_parser()
    p_args = parser.parse_args(args)

    # Set up logging
    logging.basicConfig(
        level=logging.DEBUG if p_args.debug else logging.ERROR
    )

    sys.exit(commandline.execute(p_args))


if __name__ == '__main__':
    main()
