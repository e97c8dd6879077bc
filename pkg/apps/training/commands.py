# -*- coding: utf-8 -*-
from extensions.command_manager import Command
from apps.training.controller.train_controller import train_command

commandpatterns = [Command(train_command, name='train')]
