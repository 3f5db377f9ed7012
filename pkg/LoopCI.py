#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import loopci
import sys

if(sys.version_info.major < 3):
    raise SystemError("LoopCI requires Python 3.5 or greater")

loopci.main()
