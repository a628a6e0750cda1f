# -*- coding: utf-8 -*-

import sys

from Spanr.cli import main

sys.exit(main())
